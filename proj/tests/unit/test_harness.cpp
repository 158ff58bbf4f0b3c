#include <doctest.h>

#include <anonpram/harness.hpp>

#include <algorithm>
#include <sstream>

using namespace anonpram;
using namespace anonpram::harness;

namespace {

// Brute-force oracle: multiset comparison against [1..n].
TrialOutcome oracle_classify(std::vector<std::int64_t> names, std::uint32_t n) {
    std::vector<std::int64_t> expect;
    for (std::uint32_t i = 1; i <= n; ++i) expect.push_back(i);
    std::sort(names.begin(), names.end());
    if (names == expect) return TrialOutcome::CorrectPermutation;
    for (std::size_t i = 1; i < names.size(); ++i)
        if (names[i] == names[i - 1]) return TrialOutcome::DuplicateNames;
    return TrialOutcome::MalformedAssignment;
}

ExperimentConfig small_config(const char* algo, std::uint32_t n, std::uint32_t trials) {
    ExperimentConfig cfg;
    cfg.algorithm = algo;
    cfg.ns = {n};
    cfg.trials = trials;
    cfg.master_seed = 20260809;
    return cfg;
}

}  // namespace

TEST_CASE("outcome classification basics") {
    CHECK(classify_outcome({2, 1, 3}, 3) == TrialOutcome::CorrectPermutation);
    CHECK(classify_outcome({1, 1, 2}, 3) == TrialOutcome::DuplicateNames);
    CHECK(classify_outcome({1, 2, 2, 3}, 4) == TrialOutcome::DuplicateNames);
    CHECK(classify_outcome({1, 3}, 2) == TrialOutcome::MalformedAssignment);
}

TEST_CASE("classification agrees with the multiset oracle exhaustively") {
    // All name vectors of length n with entries in [1, n+1], n <= 5.
    for (std::uint32_t n = 1; n <= 5; ++n) {
        std::vector<std::int64_t> v(n, 1);
        for (;;) {
            REQUIRE(classify_outcome(v, n) == oracle_classify(v, n));
            std::size_t i = 0;
            while (i < n && v[i] == static_cast<std::int64_t>(n + 1)) v[i++] = 1;
            if (i == n) break;
            ++v[i];
        }
    }
    // Random vectors up to length 10.
    std::uint64_t state = 99;
    for (int it = 0; it < 20000; ++it) {
        std::uint32_t n = 1 + splitmix_mix(state += kSeedGamma) % 10;
        std::vector<std::int64_t> v(n);
        for (auto& x : v) x = 1 + static_cast<std::int64_t>(splitmix_mix(state += kSeedGamma) % 12);
        REQUIRE(classify_outcome(v, n) == oracle_classify(v, n));
    }
}

TEST_CASE("one trivial trial reports a correct permutation") {
    ExperimentResult res = run_trials(small_config("arb-bnd-lv", 1, 1));
    REQUIRE(res.reports.size() == 1);
    REQUIRE(res.reports[0].size() == 1);
    CHECK(res.reports[0][0].outcome == TrialOutcome::CorrectPermutation);
    CHECK(res.aggregates[0].error_rate.point == 0.0);
}

TEST_CASE("trial seeds derive from the master seed") {
    ExperimentResult res = run_trials(small_config("arb-bnd-lv", 4, 3));
    for (std::uint32_t t = 0; t < 3; ++t)
        CHECK(res.reports[0][t].seed == SeedSpec{20260809, t}.trial_seed());
}

TEST_CASE("identical configs produce byte-identical reports") {
    auto render = [](const ExperimentResult& r) {
        std::ostringstream csv, json;
        write_csv(csv, r);
        write_json(json, r);
        return std::pair{csv.str(), json.str()};
    };
    ExperimentConfig cfg = small_config("com-unb-lv", 16, 30);
    auto [csv_a, json_a] = render(run_trials(cfg));
    auto [csv_b, json_b] = render(run_trials(cfg));
    CHECK(csv_a == csv_b);
    CHECK(json_a == json_b);

    cfg.jobs = 2;
    auto [csv_c, json_c] = render(run_trials(cfg));
    CHECK(csv_a == csv_c);
    CHECK(json_a == json_c);
}

TEST_CASE("csv holds the documented schema") {
    ExperimentResult res = run_trials(small_config("arb-bnd-lv", 2, 4));
    std::ostringstream os;
    write_csv(os, res);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "algorithm_id,n,trial,seed,outcome,rounds,bits_total,cells_touched,outer_iterations");
    int rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(line.rfind("arb-bnd-lv,2,", 0) == 0);
        CHECK(std::count(line.begin(), line.end(), ',') == 8);
    }
    CHECK(rows == 4);
}

TEST_CASE("aggregate bit totals equal the per-trial sums") {
    ExperimentResult res = run_trials(small_config("com-unb-lv", 8, 25));
    double sum = 0;
    for (const auto& r : res.reports[0]) sum += static_cast<double>(r.metrics.random_bits);
    CHECK(res.aggregates[0].mean_bits * 25 == doctest::Approx(sum));
    std::uint64_t hist_total = 0;
    for (const auto& [iters, count] : res.aggregates[0].retry_histogram) hist_total += count;
    CHECK(hist_total == 25);
}

TEST_CASE("Las Vegas trials never classify as duplicates") {
    for (const char* id : {"arb-bnd-lv", "arb-unb-lv", "com-bnd-lv", "com-unb-lv"}) {
        ExperimentResult res = run_trials(small_config(id, 12, 40));
        CHECK(res.aggregates[0].duplicate_trials == 0);
    }
}

TEST_CASE("invalid configurations are rejected before running") {
    CHECK_THROWS_AS(run_trials(small_config("no-such-algo", 4, 1)), ConfigError);

    ExperimentConfig cfg = small_config("com-bnd-lv", 4, 1);
    cfg.selector = WriteSelector::FirstByProcessorIndex;
    CHECK_THROWS_AS(run_trials(cfg), ConfigError);

    cfg = small_config("arb-bnd-lv", 4, 0);
    CHECK_THROWS_AS(run_trials(cfg), ConfigError);

    cfg = small_config("arb-bnd-lv", 4, 1);
    cfg.growth = GrowthFunction::Doubling;
    CHECK_THROWS_AS(run_trials(cfg), ConfigError);

    cfg = small_config("arb-bnd-lv", 4, 1);
    cfg.beta = -2.0;
    CHECK_THROWS_AS(run_trials(cfg), ConfigError);
}

TEST_CASE("digest distinguishes order and content") {
    CHECK(digest_names({1, 2, 3}) != digest_names({3, 2, 1}));
    CHECK(digest_names({1, 2, 3}) != digest_names({1, 2}));
    CHECK(digest_names({1, 2, 3}) == digest_names({1, 2, 3}));
}
