#include "anonpram/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <thread>

#include <json.hpp>

namespace anonpram::harness {

const char* to_string(TrialOutcome o) {
    switch (o) {
        case TrialOutcome::CorrectPermutation: return "CorrectPermutation";
        case TrialOutcome::DuplicateNames: return "DuplicateNames";
        case TrialOutcome::CapExceeded: return "CapExceeded";
        case TrialOutcome::ModelViolation: return "ModelViolation";
        case TrialOutcome::MalformedAssignment: return "MalformedAssignment";
    }
    return "?";
}

TrialOutcome classify_outcome(const std::vector<std::int64_t>& names, std::uint32_t n) {
    std::vector<std::int64_t> sorted = names;
    std::sort(sorted.begin(), sorted.end());
    bool duplicates = false;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i] == sorted[i - 1]) duplicates = true;
    if (duplicates) return TrialOutcome::DuplicateNames;
    bool permutation = sorted.size() == n;
    for (std::size_t i = 0; i < sorted.size() && permutation; ++i)
        if (sorted[i] != static_cast<std::int64_t>(i + 1)) permutation = false;
    return permutation ? TrialOutcome::CorrectPermutation : TrialOutcome::MalformedAssignment;
}

std::uint64_t digest_names(const std::vector<std::int64_t>& names) {
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (std::int64_t v : names)
        h = splitmix_mix(h ^ (static_cast<std::uint64_t>(v) + kSeedGamma));
    return h;
}

WritePolicy policy_for(const algo::AlgorithmInfo& info, std::optional<WriteSelector> selector) {
    if (info.model == WritePolicy::Variant::Common) {
        if (selector)
            throw ConfigError(std::string(info.id) +
                              ": write selectors apply to Arbitrary-model algorithms only");
        return WritePolicy::common();
    }
    return WritePolicy::arbitrary(selector.value_or(WriteSelector::FirstByProcessorIndex));
}

namespace {

void validate(const ExperimentConfig& cfg, const algo::AlgorithmInfo& info) {
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    if (cfg.ns.empty()) throw ConfigError("need at least one processor count");
    for (auto n : cfg.ns)
        if (n < 1) throw ConfigError("processor count must be >= 1");
    if (cfg.beta && *cfg.beta <= 0) throw ConfigError("beta must be positive");
    if (cfg.growth && !info.uses_growth)
        throw ConfigError(std::string(info.id) + ": --growth is not a parameter here");
    if (cfg.cap_multiplier < 0) throw ConfigError("cap multiplier must be >= 0");
}

TrialReport run_one_trial(const algo::AlgorithmInfo& info, const Program& program,
                          const WritePolicy& policy, const ExperimentConfig& cfg,
                          std::uint32_t n, std::uint32_t trial, const RunLimits& limits) {
    TrialReport rep;
    rep.trial = trial;
    SeedSpec seed{cfg.master_seed, trial};
    rep.seed = seed.trial_seed();
    try {
        RunResult run = run_program(n, program, policy, seed, limits);
        rep.metrics = std::move(run.metrics);
        rep.names.reserve(n);
        for (const auto& out : run.outputs)
            rep.names.push_back(out.empty() ? 0 : out.front());
        rep.digest = digest_names(rep.names);
        rep.outcome = run.completed ? classify_outcome(rep.names, n) : TrialOutcome::CapExceeded;
    } catch (const ModelViolation&) {
        rep.outcome = TrialOutcome::ModelViolation;
    }
    return rep;
}

AggregateStats aggregate(std::uint32_t n, const std::vector<TrialReport>& reports) {
    AggregateStats agg;
    agg.n = n;
    agg.trials = reports.size();
    double sum_rounds = 0, sum_bits = 0, sum_outer = 0;
    for (const auto& r : reports) {
        sum_rounds += static_cast<double>(r.metrics.rounds);
        sum_bits += static_cast<double>(r.metrics.random_bits);
        sum_outer += static_cast<double>(r.metrics.outer_iterations);
        agg.max_rounds = std::max(agg.max_rounds, r.metrics.rounds);
        agg.max_bits = std::max(agg.max_bits, r.metrics.random_bits);
        agg.max_cells = std::max(agg.max_cells, r.metrics.cells_touched);
        agg.retry_histogram[r.metrics.outer_iterations]++;
        switch (r.outcome) {
            case TrialOutcome::DuplicateNames: ++agg.duplicate_trials; break;
            case TrialOutcome::CapExceeded: ++agg.cap_exceeded_trials; break;
            case TrialOutcome::ModelViolation: ++agg.violation_trials; break;
            case TrialOutcome::MalformedAssignment: ++agg.malformed_trials; break;
            default: break;
        }
    }
    auto count = static_cast<double>(reports.size());
    agg.mean_rounds = sum_rounds / count;
    agg.mean_bits = sum_bits / count;
    agg.mean_outer_iterations = sum_outer / count;
    agg.error_rate = stats::estimate_probability(agg.duplicate_trials, reports.size());
    return agg;
}

}  // namespace

ExperimentResult run_trials(const ExperimentConfig& cfg) {
    const algo::AlgorithmInfo* info = algo::find_algorithm(cfg.algorithm);
    if (info == nullptr) throw ConfigError("unknown algorithm id: " + cfg.algorithm);
    validate(cfg, *info);
    WritePolicy policy = policy_for(*info, cfg.selector);

    ExperimentResult result;
    result.info = info;
    result.config = cfg;

    for (std::uint32_t n : cfg.ns) {
        algo::AlgoConfig acfg;
        acfg.beta = cfg.beta;
        acfg.growth = cfg.growth;
        if (info->las_vegas) acfg.n_known = n;
        Program program = algo::make_program(*info, acfg);

        RunLimits limits;
        limits.strict_mode = cfg.strict_mode;
        limits.round_cap =
            cfg.cap_multiplier <= 0
                ? 0
                : static_cast<std::uint64_t>(cfg.cap_multiplier *
                                             static_cast<double>(algo::expected_rounds(*info, n, acfg)));

        std::vector<TrialReport> reports(cfg.trials);
        std::uint32_t jobs = std::max<std::uint32_t>(1, cfg.jobs);
        if (jobs == 1 || cfg.trials == 1) {
            for (std::uint32_t t = 0; t < cfg.trials; ++t)
                reports[t] = run_one_trial(*info, program, policy, cfg, n, t, limits);
        } else {
            // Trials are independent; each worker owns disjoint report slots,
            // so aggregation order (by trial index) is deterministic.
            std::atomic<std::uint32_t> next{0};
            auto worker = [&] {
                for (;;) {
                    std::uint32_t t = next.fetch_add(1);
                    if (t >= cfg.trials) return;
                    reports[t] = run_one_trial(*info, program, policy, cfg, n, t, limits);
                }
            };
            std::vector<std::thread> pool;
            for (std::uint32_t j = 0; j < std::min(jobs, cfg.trials); ++j)
                pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        result.aggregates.push_back(aggregate(n, reports));
        result.reports.push_back(std::move(reports));
    }
    return result;
}

void write_csv(std::ostream& os, const ExperimentResult& result) {
    os << "algorithm_id,n,trial,seed,outcome,rounds,bits_total,cells_touched,outer_iterations\n";
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
        std::uint32_t n = result.config.ns[i];
        for (const auto& r : result.reports[i]) {
            os << result.config.algorithm << ',' << n << ',' << r.trial << ',' << r.seed << ','
               << to_string(r.outcome) << ',' << r.metrics.rounds << ',' << r.metrics.random_bits
               << ',' << r.metrics.cells_touched << ',' << r.metrics.outer_iterations << '\n';
        }
    }
}

void write_json(std::ostream& os, const ExperimentResult& result) {
    nlohmann::json j;
    j["config"] = {
        {"algorithm", result.config.algorithm},
        {"ns", result.config.ns},
        {"trials", result.config.trials},
        {"master_seed", result.config.master_seed},
        {"beta", result.config.beta ? nlohmann::json(*result.config.beta) : nlohmann::json()},
        {"growth", result.config.growth
                       ? nlohmann::json(*result.config.growth == GrowthFunction::Successor
                                            ? "successor"
                                            : "doubling")
                       : nlohmann::json()},
        {"selector", result.config.selector ? nlohmann::json(to_string(*result.config.selector))
                                            : nlohmann::json()},
        {"cap_multiplier", result.config.cap_multiplier},
        {"strict_mode", result.config.strict_mode},
    };
    nlohmann::json per_n = nlohmann::json::array();
    for (const auto& agg : result.aggregates) {
        nlohmann::json retries = nlohmann::json::object();
        for (const auto& [iters, count] : agg.retry_histogram)
            retries[std::to_string(iters)] = count;
        per_n.push_back({
            {"n", agg.n},
            {"trials", agg.trials},
            {"mean_rounds", agg.mean_rounds},
            {"max_rounds", agg.max_rounds},
            {"mean_bits", agg.mean_bits},
            {"max_bits", agg.max_bits},
            {"max_cells_touched", agg.max_cells},
            {"mean_outer_iterations", agg.mean_outer_iterations},
            {"duplicate_trials", agg.duplicate_trials},
            {"cap_exceeded_trials", agg.cap_exceeded_trials},
            {"violation_trials", agg.violation_trials},
            {"error_rate",
             {{"point", agg.error_rate.point},
              {"wilson99_lower", agg.error_rate.lower},
              {"wilson99_upper", agg.error_rate.upper}}},
            {"retry_histogram", retries},
        });
    }
    j["aggregates"] = per_n;
    os << j.dump(2) << '\n';
}

}  // namespace anonpram::harness
