#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "anonpram/rng.hpp"
#include "anonpram/types.hpp"

namespace anonpram {

/// Rule used by an Arbitrary PRAM to pick the surviving value of a
/// concurrent write. This is simulation machinery, invisible to algorithms;
/// correctness claims must hold for every selector.
enum class WriteSelector : std::uint8_t {
    FirstByProcessorIndex,
    LastByProcessorIndex,
    SeededRandom,
    /// Adversarial stress: survives the value attempted by the largest
    /// group of writers (ties broken by lowest value), maximizing the
    /// number of processors that see their own write succeed.
    MaximizeDistinctSurvivors,
};

const char* to_string(WriteSelector s);

/// Concurrent-write semantics of the simulated PRAM.
struct WritePolicy {
    enum class Variant : std::uint8_t { Common, Arbitrary };

    Variant variant = Variant::Common;
    WriteSelector selector = WriteSelector::FirstByProcessorIndex;

    static WritePolicy common() { return {Variant::Common, WriteSelector::FirstByProcessorIndex}; }
    static WritePolicy arbitrary(WriteSelector s = WriteSelector::FirstByProcessorIndex) {
        return {Variant::Arbitrary, s};
    }

    bool is_common() const { return variant == Variant::Common; }
};

/// One processor's attempt in a concurrent write.
struct WriteAttempt {
    std::uint32_t processor;
    CellValue value;
};

/// Resolves a non-empty multiset of concurrent writes to one cell.
///
/// Common: all values must be identical, otherwise the operation is illegal.
/// Arbitrary: returns the selector's pick, always an element of the attempts.
/// `selector_rng` is required for the SeededRandom selector and is a
/// simulator-side stream, not counted against any processor.
CellValue resolve_concurrent_writes(CellAddr addr,
                                    std::span<const WriteAttempt> attempts,
                                    const WritePolicy& policy,
                                    BitSource* selector_rng = nullptr);

}  // namespace anonpram
