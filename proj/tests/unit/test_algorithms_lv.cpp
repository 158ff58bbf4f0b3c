#include <doctest.h>

#include <anonpram/algorithms.hpp>
#include <anonpram/harness.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <deque>
#include <vector>

using namespace anonpram;

namespace {

algo::AlgoConfig lv_config(std::uint32_t n, std::optional<double> beta = {}) {
    algo::AlgoConfig cfg;
    cfg.n_known = n;
    cfg.beta = beta;
    return cfg;
}

RunResult run_lv(const char* id, std::uint32_t n, std::uint64_t trial,
                 WriteSelector sel = WriteSelector::FirstByProcessorIndex,
                 const BitSourceFactory& fac = nullptr) {
    const auto* info = algo::find_algorithm(id);
    REQUIRE(info != nullptr);
    auto cfg = lv_config(n);
    Program prog = algo::make_program(*info, cfg);
    RunLimits lim;
    lim.round_cap = 64 * algo::expected_rounds(*info, n, cfg);
    WritePolicy pol = info->model == WritePolicy::Variant::Common
                          ? WritePolicy::common()
                          : WritePolicy::arbitrary(sel);
    return run_program(n, prog, pol, SeedSpec{0xfeed, trial}, lim, fac);
}

std::vector<std::int64_t> names_of(const RunResult& r) {
    std::vector<std::int64_t> names;
    for (const auto& o : r.outputs) names.push_back(o.empty() ? -1 : o[0]);
    return names;
}

bool is_permutation(const RunResult& r, std::uint32_t n) {
    return harness::classify_outcome(names_of(r), n) ==
           harness::TrialOutcome::CorrectPermutation;
}

BitSourceFactory scripts(std::vector<std::deque<std::uint64_t>> per_proc) {
    auto shared = std::make_shared<std::vector<std::deque<std::uint64_t>>>(std::move(per_proc));
    return [shared](std::uint32_t proc) -> BitSourcePtr {
        return std::make_unique<FixedBitSource>((*shared)[proc]);
    };
}

}  // namespace

TEST_CASE("registry lists the eight algorithms") {
    CHECK(algo::registry().size() == 8);
    for (const char* id : {"arb-bnd-lv", "arb-unb-lv", "com-bnd-lv", "com-unb-lv", "arb-bnd-mc",
                           "arb-unb-mc", "com-bnd-mc", "com-unb-mc"})
        CHECK(algo::find_algorithm(id) != nullptr);
    CHECK(algo::find_algorithm("nope") == nullptr);
}

TEST_CASE("configuration validation happens before execution") {
    const auto* lv = algo::find_algorithm("arb-bnd-lv");
    algo::AlgoConfig no_n;
    CHECK_THROWS_AS(algo::make_program(*lv, no_n), ConfigError);

    auto bad_beta = lv_config(4);
    bad_beta.beta = -1;
    CHECK_THROWS_AS(algo::make_program(*lv, bad_beta), ConfigError);

    // com-unb-lv needs beta > 1.
    CHECK_THROWS_AS(algo::make_program(*algo::find_algorithm("com-unb-lv"), lv_config(4, 1.0)),
                    ConfigError);

    // Growth is a parameter of the unbounded MC algorithms only.
    auto with_growth = lv_config(4);
    with_growth.growth = GrowthFunction::Doubling;
    CHECK_THROWS_AS(algo::make_program(*lv, with_growth), ConfigError);

    // Value-width guard: 4096^9 does not fit a cell.
    CHECK_THROWS_AS(algo::make_program(*lv, lv_config(4096, 9.0)), ConfigError);
}

TEST_CASE("a single processor names itself 1 in one attempt") {
    for (const char* id : {"arb-bnd-lv", "arb-unb-lv", "com-bnd-lv", "com-unb-lv"}) {
        RunResult r = run_lv(id, 1, 0);
        REQUIRE(r.completed);
        CHECK(names_of(r) == std::vector<std::int64_t>{1});
        CHECK(r.metrics.outer_iterations == 1);
    }
}

TEST_CASE("arb-bnd-lv: forced pad collision costs exactly one extra attempt") {
    // Attempt 1: both processors pick pad value 1 and share the name.
    // Attempt 2: values 2 and 3 separate them.
    RunResult r = run_lv("arb-bnd-lv", 2, 0, WriteSelector::FirstByProcessorIndex,
                         scripts({{0, 1}, {0, 2}}));
    REQUIRE(r.completed);
    CHECK(r.metrics.outer_iterations == 2);
    CHECK(is_permutation(r, 2));
}

TEST_CASE("arb-unb-lv: a labeled collision forces a second attempt") {
    // Attempt 1: same bin, same label -> both take position (1,1).
    // Attempt 2: same bin, labels 1 vs 2 -> positions (1,1) and (1,2).
    RunResult r = run_lv("arb-unb-lv", 2, 0, WriteSelector::FirstByProcessorIndex,
                         scripts({{0, 0, 0, 0}, {0, 0, 0, 1}}));
    REQUIRE(r.completed);
    CHECK(r.metrics.outer_iterations == 2);
    CHECK(is_permutation(r, 2));
}

TEST_CASE("com-bnd-lv: detected collisions re-throw until bins separate") {
    // Stage 1: both land in bin 1 and every check fires (opposite coins).
    // Stage 2: bins 1 and 2; lone balls never see a collision; names 1, 2.
    RunResult r = run_lv("com-bnd-lv", 2, 0, WriteSelector::FirstByProcessorIndex,
                         scripts({{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                                  {0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}}));
    REQUIRE(r.completed);
    CHECK(r.metrics.outer_iterations == 1);
    CHECK(is_permutation(r, 2));
    auto names = names_of(r);
    CHECK(names[0] == 1);
    CHECK(names[1] == 2);
}

TEST_CASE("com-unb-lv: a persistent collision fails the occupancy guard once") {
    RunResult r = run_lv("com-unb-lv", 2, 0, WriteSelector::FirstByProcessorIndex,
                         scripts({{0, 0, 0, 0, 0}, {0, 1, 0, 1, 1}}));
    REQUIRE(r.completed);
    CHECK(r.metrics.outer_iterations == 2);
    auto names = names_of(r);
    CHECK(names[0] == 1);
    CHECK(names[1] == 2);
}

TEST_CASE("LV outputs are permutations for every selector and seed") {
    const std::vector<WriteSelector> selectors = {
        WriteSelector::FirstByProcessorIndex, WriteSelector::LastByProcessorIndex,
        WriteSelector::SeededRandom, WriteSelector::MaximizeDistinctSurvivors};
    for (const char* id : {"arb-bnd-lv", "arb-unb-lv"}) {
        for (WriteSelector sel : selectors)
            for (std::uint32_t n : {2u, 3u, 5u, 9u, 16u})
                for (std::uint64_t t = 0; t < 8; ++t) {
                    RunResult r = run_lv(id, n, t, sel);
                    REQUIRE(r.completed);
                    REQUIRE(is_permutation(r, n));
                }
    }
    for (const char* id : {"com-bnd-lv", "com-unb-lv"})
        for (std::uint32_t n : {2u, 3u, 5u, 9u, 16u})
            for (std::uint64_t t = 0; t < 8; ++t) {
                RunResult r = run_lv(id, n, t);
                REQUIRE(r.completed);
                REQUIRE(is_permutation(r, n));
            }
}

TEST_CASE("bounded-memory Las Vegas algorithms stay inside their windows") {
    for (std::uint32_t n : {2u, 8u, 32u}) {
        CHECK(run_lv("arb-bnd-lv", n, 1).metrics.cells_touched <= 2);
        CHECK(run_lv("com-bnd-lv", n, 1).metrics.cells_touched <= 5);
    }
}

TEST_CASE("com-bnd-lv keeps within its asserted n lg n round budget") {
    double total = 0;
    const int trials = 10;
    for (std::uint64_t t = 0; t < trials; ++t)
        total += static_cast<double>(run_lv("com-bnd-lv", 64, t).metrics.rounds);
    CHECK(total / trials <= 100.0 * 64 * 6);  // C = 100
}

TEST_CASE("com-unb-lv rounds grow affinely in lg n") {
    std::vector<std::pair<double, double>> pts;
    for (std::uint32_t n : {16u, 32u, 64u, 128u, 256u}) {
        double mean = 0;
        const int trials = 10;
        for (std::uint64_t t = 0; t < trials; ++t)
            mean += static_cast<double>(run_lv("com-unb-lv", n, t).metrics.rounds);
        pts.emplace_back(n, mean / trials);
    }
    auto fit = stats::fit_scaling(pts, stats::ScalingModel::Log);
    CHECK(fit.r_squared >= 0.85);
}

TEST_CASE("arb-unb-lv inner iterations track the fullest bin") {
    // outputs[1] carries each processor's final bin.
    for (std::uint64_t t = 0; t < 5; ++t) {
        RunResult r = run_lv("arb-unb-lv", 64, t);
        REQUIRE(r.completed);
        std::map<std::int64_t, int> balls;
        for (const auto& o : r.outputs) balls[o[1]]++;
        int fullest = 0;
        for (const auto& [bin, c] : balls) fullest = std::max(fullest, c);
        double c_ln_n = 3.0 * std::log(64.0);
        CHECK(static_cast<double>(fullest) <= c_ln_n);
    }
}
