#include "algo_internal.hpp"

namespace anonpram::algo {

namespace {

// Default beta per algorithm: the smallest constants the analysis supports
// at error exponent around 2.
const std::vector<AlgorithmInfo> kRegistry = {
    {"arb-bnd-lv", "Arbitrary-Bounded-LV",
     "Las Vegas, Arbitrary PRAM, constant shared memory, n known",
     WritePolicy::Variant::Arbitrary, true, true, 4.0, false, GrowthFunction::Successor},
    {"arb-unb-lv", "Arbitrary-Unbounded-LV",
     "Las Vegas, Arbitrary PRAM, unbounded shared memory, n known",
     WritePolicy::Variant::Arbitrary, false, true, 4.0, false, GrowthFunction::Successor},
    {"com-bnd-lv", "Common-Bounded-LV",
     "Las Vegas, Common PRAM, constant shared memory, n known",
     WritePolicy::Variant::Common, true, true, 6.0, false, GrowthFunction::Successor},
    {"com-unb-lv", "Common-Unbounded-LV",
     "Las Vegas, Common PRAM, unbounded shared memory, n known",
     WritePolicy::Variant::Common, false, true, 2.0, false, GrowthFunction::Successor},
    {"arb-bnd-mc", "Arbitrary-Bounded-MC",
     "Monte Carlo, Arbitrary PRAM, constant shared memory, n unknown",
     WritePolicy::Variant::Arbitrary, true, false, 6.0, false, GrowthFunction::Successor},
    {"arb-unb-mc", "Arbitrary-Unbounded-MC",
     "Monte Carlo, Arbitrary PRAM, unbounded shared memory, n unknown",
     WritePolicy::Variant::Arbitrary, false, false, 9.0, true, GrowthFunction::Successor},
    {"com-bnd-mc", "Common-Bounded-MC",
     "Monte Carlo, Common PRAM, constant shared memory, n unknown",
     WritePolicy::Variant::Common, true, false, 6.0, false, GrowthFunction::Successor},
    {"com-unb-mc", "Common-Unbounded-MC",
     "Monte Carlo, Common PRAM, unbounded shared memory, n unknown",
     WritePolicy::Variant::Common, false, false, 4.0, true, GrowthFunction::Successor},
};

}  // namespace

const std::vector<AlgorithmInfo>& registry() { return kRegistry; }

const AlgorithmInfo* find_algorithm(std::string_view id) {
    for (const auto& a : kRegistry)
        if (a.id == id) return &a;
    return nullptr;
}

double effective_beta(const AlgorithmInfo& info, const AlgoConfig& cfg) {
    return cfg.beta.value_or(info.default_beta);
}

GrowthFunction effective_growth(const AlgorithmInfo& info, const AlgoConfig& cfg) {
    return cfg.growth.value_or(info.default_growth);
}

Program make_program(const AlgorithmInfo& info, const AlgoConfig& cfg) {
    double beta = effective_beta(info, cfg);
    if (beta <= 0.0) throw ConfigError(std::string(info.id) + ": beta must be positive");
    if (cfg.growth && !info.uses_growth)
        throw ConfigError(std::string(info.id) + ": growth schedule is not a parameter here");
    if (info.las_vegas) {
        if (!cfg.n_known)
            throw ConfigError(std::string(info.id) + ": Las Vegas algorithms require known n");
        if (*cfg.n_known < 1) throw ConfigError("processor count must be at least 1");
    }
    std::uint32_t n = cfg.n_known.value_or(0);

    if (info.id == "arb-bnd-lv") return make_arbitrary_bounded_lv(n, beta);
    if (info.id == "arb-unb-lv") return make_arbitrary_unbounded_lv(n, beta);
    if (info.id == "com-bnd-lv") return make_common_bounded_lv(n, beta);
    if (info.id == "com-unb-lv") {
        if (beta <= 1.0) throw ConfigError("com-unb-lv: requires beta > 1");
        return make_common_unbounded_lv(n, beta);
    }
    if (info.id == "arb-bnd-mc") return make_arbitrary_bounded_mc(beta);
    if (info.id == "arb-unb-mc")
        return make_arbitrary_unbounded_mc(beta, effective_growth(info, cfg));
    if (info.id == "com-bnd-mc") return make_common_bounded_mc(beta);
    if (info.id == "com-unb-mc")
        return make_common_unbounded_mc(beta, effective_growth(info, cfg));
    throw ConfigError("unknown algorithm id: " + std::string(info.id));
}

std::uint64_t expected_rounds(const AlgorithmInfo& info, std::uint32_t n, const AlgoConfig& cfg) {
    double beta = effective_beta(info, cfg);
    auto dn = static_cast<double>(n);
    double lg = std::log2(dn + 2.0);
    double ln = std::log(dn + 2.0);
    double f = 0;
    if (info.id == "arb-bnd-lv") f = 4.0 * dn + 8;
    else if (info.id == "arb-unb-lv") f = 21.0 * ln + 2.0 * lg + 40;
    else if (info.id == "com-bnd-lv") f = 25.0 * beta * dn * ln + 200;
    else if (info.id == "com-unb-lv") f = 15.0 * lg + 6.0 * std::log2((beta + 1.0) * dn + 8) + 60;
    else if (info.id == "arb-bnd-mc") f = 8.0 * dn * (std::log2(beta * lg + 2) + 4) + 64;
    else if (info.id == "arb-unb-mc") f = 8.0 * beta * (lg + 4) * (lg + 4) + 100;
    else if (info.id == "com-bnd-mc") f = 60.0 * (dn + 8) * (lg + 4) + 400;
    else if (info.id == "com-unb-mc") f = (10.0 * beta + 8) * (lg + 4) * (lg + 4) + 300;
    else throw ConfigError("unknown algorithm id");
    return static_cast<std::uint64_t>(f);
}

}  // namespace anonpram::algo
