#include "anonpram/policy.hpp"

#include <algorithm>
#include <cstdio>

namespace anonpram {

const char* to_string(WriteSelector s) {
    switch (s) {
        case WriteSelector::FirstByProcessorIndex: return "first";
        case WriteSelector::LastByProcessorIndex: return "last";
        case WriteSelector::SeededRandom: return "random";
        case WriteSelector::MaximizeDistinctSurvivors: return "adversarial";
    }
    return "?";
}

CellValue resolve_concurrent_writes(CellAddr addr,
                                    std::span<const WriteAttempt> attempts,
                                    const WritePolicy& policy,
                                    BitSource* selector_rng) {
    if (attempts.empty())
        throw std::logic_error("resolve_concurrent_writes: empty attempt set");

    if (policy.is_common()) {
        CellValue v = attempts.front().value;
        for (const auto& a : attempts) {
            if (a.value != v) {
                char buf[128];
                std::snprintf(buf, sizeof buf,
                              "concurrent Common write of distinct values (%lld vs %lld) to cell %llu",
                              static_cast<long long>(v), static_cast<long long>(a.value),
                              static_cast<unsigned long long>(addr));
                throw ModelViolation(ModelViolation::Kind::IllegalCommonWrite, buf);
            }
        }
        return v;
    }

    switch (policy.selector) {
        case WriteSelector::FirstByProcessorIndex: {
            const WriteAttempt* best = &attempts.front();
            for (const auto& a : attempts)
                if (a.processor < best->processor) best = &a;
            return best->value;
        }
        case WriteSelector::LastByProcessorIndex: {
            const WriteAttempt* best = &attempts.front();
            for (const auto& a : attempts)
                if (a.processor > best->processor) best = &a;
            return best->value;
        }
        case WriteSelector::SeededRandom: {
            if (selector_rng == nullptr)
                throw std::logic_error("SeededRandom selector requires a selector stream");
            // Sorted by processor index so the pick is independent of the
            // order attempts were collected in.
            std::vector<WriteAttempt> sorted(attempts.begin(), attempts.end());
            std::sort(sorted.begin(), sorted.end(),
                      [](const WriteAttempt& a, const WriteAttempt& b) {
                          return a.processor < b.processor;
                      });
            std::uint64_t pick = draw_uniform(*selector_rng, sorted.size());
            return sorted[pick - 1].value;
        }
        case WriteSelector::MaximizeDistinctSurvivors: {
            // Value backed by the most writers survives; ties go to the
            // lowest value.
            std::vector<CellValue> values;
            values.reserve(attempts.size());
            for (const auto& a : attempts) values.push_back(a.value);
            std::sort(values.begin(), values.end());
            CellValue best = values.front();
            std::size_t best_count = 0;
            std::size_t i = 0;
            while (i < values.size()) {
                std::size_t j = i;
                while (j < values.size() && values[j] == values[i]) ++j;
                if (j - i > best_count) {
                    best_count = j - i;
                    best = values[i];
                }
                i = j;
            }
            return best;
        }
    }
    throw std::logic_error("unknown write selector");
}

}  // namespace anonpram
