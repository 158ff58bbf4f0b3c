#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "anonpram/memory.hpp"
#include "anonpram/policy.hpp"
#include "anonpram/types.hpp"

namespace anonpram {

/// One processor's action in one round: a read, a write, or nothing.
struct MemoryOp {
    enum class Kind : std::uint8_t { NoOp, Read, Write };

    Kind kind = Kind::NoOp;
    CellAddr addr = 0;
    CellValue value = 0;

    static MemoryOp none() { return {}; }
    static MemoryOp read(CellAddr a) { return {Kind::Read, a, 0}; }
    static MemoryOp write(CellAddr a, CellValue v) { return {Kind::Write, a, v}; }
};

/// Result of one synchronous round.
struct RoundOutcome {
    /// Read results, indexed like the submitted ops; empty optional for
    /// processors that did not read. Values reflect memory at the start of
    /// the round.
    std::vector<std::optional<CellValue>> reads;
    /// Cells written this round (resolved values already applied).
    std::vector<CellAddr> written;
};

/// Executes one lock-step round: all reads see start-of-round state, all
/// writes are grouped per cell, resolved under `policy`, and applied at the
/// end of the round. In strict mode (the default) no cell may be both read
/// and written within the round.
///
/// Throws ModelViolation on an illegal Common write or a strict-mode clash.
RoundOutcome submit_round(std::span<const MemoryOp> ops,
                          const WritePolicy& policy,
                          SharedMemory& memory,
                          BitSource* selector_rng = nullptr,
                          bool strict = true);

}  // namespace anonpram
