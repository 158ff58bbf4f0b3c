#include <doctest.h>

#include <anonpram/policy.hpp>

#include <algorithm>
#include <vector>

using namespace anonpram;

namespace {
std::vector<WriteAttempt> attempts(std::initializer_list<std::pair<std::uint32_t, CellValue>> xs) {
    std::vector<WriteAttempt> v;
    for (auto [p, val] : xs) v.push_back({p, val});
    return v;
}
}  // namespace

TEST_CASE("Common accepts identical values") {
    auto a = attempts({{0, 5}, {1, 5}, {2, 5}});
    CHECK(resolve_concurrent_writes(0, a, WritePolicy::common()) == 5);
}

TEST_CASE("Common rejects distinct values") {
    auto a = attempts({{0, 5}, {1, 7}});
    CHECK_THROWS_AS(resolve_concurrent_writes(0, a, WritePolicy::common()), ModelViolation);
    try {
        resolve_concurrent_writes(0, a, WritePolicy::common());
    } catch (const ModelViolation& v) {
        CHECK(v.kind() == ModelViolation::Kind::IllegalCommonWrite);
    }
}

TEST_CASE("first/last selectors pick by processor index") {
    auto a = attempts({{2, 9}, {0, 4}});
    CHECK(resolve_concurrent_writes(0, a,
                                    WritePolicy::arbitrary(WriteSelector::FirstByProcessorIndex)) == 4);
    CHECK(resolve_concurrent_writes(0, a,
                                    WritePolicy::arbitrary(WriteSelector::LastByProcessorIndex)) == 9);
}

TEST_CASE("adversarial selector keeps the largest write group") {
    auto a = attempts({{0, 3}, {1, 7}, {2, 7}});
    CHECK(resolve_concurrent_writes(
              0, a, WritePolicy::arbitrary(WriteSelector::MaximizeDistinctSurvivors)) == 7);
    auto tie = attempts({{0, 7}, {1, 3}});
    CHECK(resolve_concurrent_writes(
              0, tie, WritePolicy::arbitrary(WriteSelector::MaximizeDistinctSurvivors)) == 3);
}

TEST_CASE("seeded selector is deterministic and stays inside the attempts") {
    auto a = attempts({{0, 10}, {1, 20}, {2, 30}, {3, 40}, {4, 50}});
    SplitMixSource s1(99), s2(99);
    auto pol = WritePolicy::arbitrary(WriteSelector::SeededRandom);
    for (int i = 0; i < 50; ++i) {
        CellValue v1 = resolve_concurrent_writes(0, a, pol, &s1);
        CellValue v2 = resolve_concurrent_writes(0, a, pol, &s2);
        CHECK(v1 == v2);
        CHECK(v1 % 10 == 0);
        CHECK(v1 >= 10);
        CHECK(v1 <= 50);
    }
    CHECK_THROWS(resolve_concurrent_writes(0, a, pol, nullptr));
}

TEST_CASE("every selector returns an attempted value") {
    SplitMixSource rng(123);
    SplitMixSource sel_rng(7);
    for (int round = 0; round < 300; ++round) {
        std::vector<WriteAttempt> a;
        std::uint32_t k = 1 + static_cast<std::uint32_t>(draw_uniform(rng, 8));
        for (std::uint32_t i = 0; i < k; ++i)
            a.push_back({i, static_cast<CellValue>(draw_uniform(rng, 5))});
        for (WriteSelector s : {WriteSelector::FirstByProcessorIndex,
                                WriteSelector::LastByProcessorIndex, WriteSelector::SeededRandom,
                                WriteSelector::MaximizeDistinctSurvivors}) {
            CellValue v = resolve_concurrent_writes(0, a, WritePolicy::arbitrary(s), &sel_rng);
            CHECK(std::any_of(a.begin(), a.end(),
                              [&](const WriteAttempt& at) { return at.value == v; }));
        }
    }
}
