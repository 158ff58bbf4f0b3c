#include <doctest.h>

#include <anonpram/algorithms.hpp>
#include <anonpram/harness.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace anonpram;

namespace {

RunResult run_mc(const char* id, std::uint32_t n, std::uint64_t trial,
                 std::optional<GrowthFunction> growth = {},
                 WriteSelector sel = WriteSelector::FirstByProcessorIndex,
                 std::uint64_t round_cap = 0) {
    const auto* info = algo::find_algorithm(id);
    REQUIRE(info != nullptr);
    algo::AlgoConfig cfg;
    cfg.growth = growth;
    Program prog = algo::make_program(*info, cfg);
    RunLimits lim;
    lim.round_cap = round_cap;
    WritePolicy pol = info->model == WritePolicy::Variant::Common
                          ? WritePolicy::common()
                          : WritePolicy::arbitrary(sel);
    return run_program(n, prog, pol, SeedSpec{0x6dc0de, trial}, lim);
}

std::vector<std::int64_t> names_of(const RunResult& r) {
    std::vector<std::int64_t> names;
    for (const auto& o : r.outputs) names.push_back(o.empty() ? -1 : o[0]);
    return names;
}

// Monte Carlo contract: names fill [1..max] contiguously; duplication is the
// only possible defect.
void check_contiguous(const RunResult& r) {
    auto names = names_of(r);
    std::sort(names.begin(), names.end());
    REQUIRE(names.front() == 1);
    for (std::size_t i = 1; i < names.size(); ++i) {
        REQUIRE(names[i] >= names[i - 1]);
        REQUIRE(names[i] - names[i - 1] <= 1);
    }
    REQUIRE(names.back() <= static_cast<std::int64_t>(names.size()));
}

}  // namespace

TEST_CASE("single-processor Monte Carlo runs name it 1") {
    for (const char* id : {"arb-bnd-mc", "arb-unb-mc", "com-bnd-mc", "com-unb-mc"}) {
        RunResult r = run_mc(id, 1, 0);
        REQUIRE(r.completed);
        CHECK(names_of(r) == std::vector<std::int64_t>{1});
    }
}

TEST_CASE("arb-bnd-mc terminates uncapped within the doubling budget") {
    for (std::uint32_t n : {1u, 2u, 5u, 16u, 64u}) {
        for (std::uint64_t t = 0; t < 10; ++t) {
            RunResult r = run_mc("arb-bnd-mc", n, t);
            REQUIRE(r.completed);
            double lg_n = std::max(1.0, std::log2(static_cast<double>(n)));
            CHECK(static_cast<double>(r.metrics.outer_iterations) <=
                  std::log2(6.0 * lg_n) + 2.0);
            check_contiguous(r);
        }
    }
}

TEST_CASE("arb-unb-mc terminates uncapped under both growth schedules and all selectors") {
    const std::vector<WriteSelector> selectors = {
        WriteSelector::FirstByProcessorIndex, WriteSelector::LastByProcessorIndex,
        WriteSelector::SeededRandom, WriteSelector::MaximizeDistinctSurvivors};
    for (GrowthFunction g : {GrowthFunction::Successor, GrowthFunction::Doubling})
        for (WriteSelector sel : selectors)
            for (std::uint32_t n : {1u, 3u, 16u, 48u}) {
                RunResult r = run_mc("arb-unb-mc", n, 5, g, sel);
                REQUIRE(r.completed);
                check_contiguous(r);
            }
}

TEST_CASE("duplicate names are the only Monte Carlo failure mode") {
    int duplicates = 0;
    for (std::uint64_t t = 0; t < 40; ++t) {
        RunResult r = run_mc("arb-bnd-mc", 2, t);
        REQUIRE(r.completed);
        check_contiguous(r);
        if (harness::classify_outcome(names_of(r), 2) == harness::TrialOutcome::DuplicateNames)
            ++duplicates;
    }
    // At n=2 the collision chance is substantial; the error path must be
    // reachable and must look like duplication, never like a gap.
    CHECK(duplicates > 0);
}

TEST_CASE("a fully missed collision hands both balls the same name") {
    // Two processors, scripted: both pick bin 1 of the 24-bin estimate
    // stage, then produce equal coins through all ceil(6 lg 24) = 28
    // verification rounds. Nothing is detected, both claim Last-Name 1,
    // and the run ends as the duplicate error case.
    const auto* info = algo::find_algorithm("com-bnd-mc");
    Program prog = algo::make_program(*info, {});
    BitSourceFactory fac = [](std::uint32_t) -> BitSourcePtr {
        std::deque<std::uint64_t> script;
        script.push_back(0);  // bin draw in [1, 24]
        for (int i = 0; i < 28; ++i) script.push_back(0);  // coins, all tails
        return std::make_unique<FixedBitSource>(script);
    };
    RunResult r = run_program(2, prog, WritePolicy::common(), SeedSpec{0, 0}, {}, fac);
    REQUIRE(r.completed);
    CHECK(r.outputs[0][0] == 1);
    CHECK(r.outputs[1][0] == 1);
    CHECK(harness::classify_outcome(names_of(r), 2) == harness::TrialOutcome::DuplicateNames);
}

TEST_CASE("estimate-size returns (24,24) for one processor") {
    Program p = algo::make_estimate_size_probe();
    for (std::uint64_t t = 0; t < 5; ++t) {
        RunResult r = run_program(1, p, WritePolicy::common(), SeedSpec{5, t});
        CHECK(r.outputs[0][0] == 24);
        CHECK(r.outputs[0][1] == 24);
    }
}

TEST_CASE("estimate-size never reaches 6n") {
    Program p = algo::make_estimate_size_probe();
    for (std::uint32_t n : {20u, 32u, 64u}) {
        for (std::uint64_t t = 0; t < 40; ++t) {
            RunResult r = run_program(n, p, WritePolicy::common(), SeedSpec{6, t});
            CHECK(r.outputs[0][0] < 6 * static_cast<std::int64_t>(n));
            // Every processor reports the same estimate.
            CHECK(r.outputs[n - 1][0] == r.outputs[0][0]);
        }
    }
}

TEST_CASE("gauge-size hand trace: one ball, beta 3, successor") {
    Program p = algo::make_gauge_size_probe(3.0, GrowthFunction::Successor);
    RunResult r = run_program(1, p, WritePolicy::common(), SeedSpec{7, 0});
    CHECK(r.outputs[0][0] == 3);  // k=2 accepted, ceil(2^3 / 3)
}

TEST_CASE("gauge-size certainty bounds") {
    // The sure Successor bound: the guard passes at latest once 2^k reaches
    // beta*n, so the accepted k satisfies 2^k < 2 beta n and the returned
    // ceil(2^(k+1)/beta) stays below 4n. (2n can be beaten: one ball already
    // yields 3.)
    Program succ = algo::make_gauge_size_probe(3.0, GrowthFunction::Successor);
    for (std::uint32_t n : {1u, 2u, 7u, 16u, 33u, 64u, 256u}) {
        for (std::uint64_t t = 0; t < 30; ++t) {
            RunResult r = run_program(n, succ, WritePolicy::common(), SeedSpec{8, t});
            CHECK(r.outputs[0][0] <= 4 * static_cast<std::int64_t>(n));
        }
    }
    Program dbl = algo::make_gauge_size_probe(3.0, GrowthFunction::Doubling);
    for (std::uint32_t n : {1u, 5u, 16u, 32u}) {
        for (std::uint64_t t = 0; t < 20; ++t) {
            RunResult r = run_program(n, dbl, WritePolicy::common(), SeedSpec{9, t});
            CHECK(r.outputs[0][0] <= 2 * 3 * static_cast<std::int64_t>(n) *
                                         static_cast<std::int64_t>(n));
        }
    }
}

TEST_CASE("common MC algorithms never trip the Common write rule") {
    // Any IllegalCommonWrite would surface as a ModelViolation.
    for (const char* id : {"com-bnd-mc", "com-unb-mc"})
        for (std::uint32_t n : {2u, 7u, 24u})
            for (std::uint64_t t = 0; t < 6; ++t) {
                RunResult r = run_mc(id, n, t, {}, WriteSelector::FirstByProcessorIndex,
                                     1u << 24);
                REQUIRE(r.completed);
                check_contiguous(r);
            }
}

TEST_CASE("bounded-memory MC algorithms stay inside their windows") {
    for (std::uint32_t n : {2u, 16u, 64u}) {
        CHECK(run_mc("arb-bnd-mc", n, 3).metrics.cells_touched <= 3);
        CHECK(run_mc("com-bnd-mc", n, 3, {}, WriteSelector::FirstByProcessorIndex, 1u << 24)
                  .metrics.cells_touched <= 6);
    }
}

TEST_CASE("com-unb-mc names are bin ranks under both growth schedules") {
    for (GrowthFunction g : {GrowthFunction::Successor, GrowthFunction::Doubling}) {
        RunResult r = run_mc("com-unb-mc", 24, 2, g, WriteSelector::FirstByProcessorIndex,
                             1u << 24);
        REQUIRE(r.completed);
        check_contiguous(r);
        // outputs[1] carries the final bin; ranks must order like bins.
        std::vector<std::pair<std::int64_t, std::int64_t>> bin_name;
        for (const auto& o : r.outputs) bin_name.emplace_back(o[1], o[0]);
        std::sort(bin_name.begin(), bin_name.end());
        for (std::size_t i = 1; i < bin_name.size(); ++i) {
            if (bin_name[i].first != bin_name[i - 1].first)
                CHECK(bin_name[i].second > bin_name[i - 1].second);
            else
                CHECK(bin_name[i].second == bin_name[i - 1].second);
        }
    }
}
