#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "anonpram/coro.hpp"
#include "anonpram/memory.hpp"
#include "anonpram/policy.hpp"
#include "anonpram/rng.hpp"
#include "anonpram/round.hpp"
#include "anonpram/types.hpp"

namespace anonpram {

class Engine;

/// What one processor sees: private randomness, one memory operation per
/// round, and shared-region allocation. Deliberately carries no processor
/// index; programs are anonymous by construction.
class ProcContext {
public:
    BitSource& bits() { return *bits_; }

    /// Uniform draw over [1, m]; private computation, costs no rounds.
    std::uint64_t draw(std::uint64_t m) { return draw_uniform(*bits_, m); }

    /// Uniform draw over [1, 2^width] charged exactly `width` bits.
    std::int64_t draw_pow2(unsigned width) { return draw_uniform_pow2(*bits_, width); }

    /// Fresh zeroed shared region. All processors reach the same allocation
    /// sites in the same order, so the k-th allocation of every processor
    /// yields one shared region; sizes must agree.
    CellAddr allocate_shared(std::uint64_t cells);

    /// Records one iteration of the algorithm's outer loop (metrics only).
    void note_outer_iteration() { ++outer_iterations_; }

    /// Declares this processor's outputs (e.g. its name).
    void set_output(std::int64_t v) { outputs_.assign(1, v); }
    void set_output(std::initializer_list<std::int64_t> vs) { outputs_.assign(vs); }

    // --- awaitables: one memory operation per round ---

    struct OpAwaiter {
        ProcContext& ctx;
        MemoryOp op;
        bool await_ready() const noexcept { return false; }
        void await_suspend(std::coroutine_handle<> h) noexcept {
            ctx.pending_ = op;
            ctx.idle_rounds_ = 0;
            ctx.resume_point_ = h;
        }
        CellValue await_resume() const noexcept { return ctx.read_result_; }
    };

    struct IdleAwaiter {
        ProcContext& ctx;
        std::uint64_t rounds;
        bool await_ready() const noexcept { return rounds == 0; }
        void await_suspend(std::coroutine_handle<> h) noexcept {
            ctx.pending_ = MemoryOp::none();
            ctx.idle_rounds_ = rounds;
            ctx.resume_point_ = h;
        }
        void await_resume() const noexcept {}
    };

    /// Read a cell this round; resumes with the start-of-round value.
    OpAwaiter read(CellAddr a) { return {*this, MemoryOp::read(a)}; }
    /// Write a cell this round (applied at end of round).
    OpAwaiter write(CellAddr a, CellValue v) { return {*this, MemoryOp::write(a, v)}; }
    /// Spend `rounds` rounds doing nothing; idle(0) is free.
    IdleAwaiter idle(std::uint64_t rounds) { return {*this, rounds}; }

private:
    friend class Engine;

    MemoryOp pending_ = MemoryOp::none();
    std::uint64_t idle_rounds_ = 0;
    std::uint32_t skip_ = 0;
    CellValue read_result_ = 0;
    std::coroutine_handle<> resume_point_;
    BitSourcePtr bits_;
    Engine* engine_ = nullptr;
    std::uint32_t alloc_index_ = 0;
    std::uint64_t outer_iterations_ = 0;
    std::vector<std::int64_t> outputs_;
};

/// A lock-step program: the same coroutine body for every processor.
struct Program {
    std::function<ProcTask(ProcContext&)> body;
    /// Cell budget for bounded-memory algorithms; accesses beyond it are
    /// model violations. Empty means unbounded memory.
    std::optional<std::uint64_t> memory_window;
};

struct RunLimits {
    /// Maximum rounds before the run is cut off (0 = unlimited). Las Vegas
    /// tails are reported as a cap hit, never as an algorithm error.
    std::uint64_t round_cap = 0;
    /// Hard ceiling on simulated cells, to fail fast on misconfiguration.
    std::uint64_t cell_limit = 1ULL << 26;
    /// Forbid same-cell read+write within a round (the read-rounds /
    /// write-rounds parity convention).
    bool strict_mode = true;
};

struct ExecutionMetrics {
    std::uint64_t rounds = 0;
    std::uint64_t random_bits = 0;          ///< exact bits drawn, rejections included
    std::uint64_t random_bits_nominal = 0;  ///< ceil(lg m) per draw
    std::uint64_t cells_touched = 0;
    std::uint64_t outer_iterations = 0;
    std::vector<std::uint64_t> bits_per_processor;
};

struct RunResult {
    /// Per-processor outputs as declared via ProcContext::set_output.
    std::vector<std::vector<std::int64_t>> outputs;
    ExecutionMetrics metrics;
    /// False iff the round cap fired before every processor halted.
    bool completed = true;
};

/// Per-trial seeds. Processor streams and the write-selector stream are all
/// derived from these via mix_seed.
struct SeedSpec {
    std::uint64_t master = 0;
    std::uint64_t trial = 0;

    std::uint64_t trial_seed() const { return mix_seed(master, trial); }
};

/// Override for the per-processor randomness, used by tests to script
/// coin flips and bin choices.
using BitSourceFactory = std::function<BitSourcePtr(std::uint32_t processor)>;

/// Drives `n` anonymous processors in lock-step until all halt or the round
/// cap fires. Deterministic: identical (program, policy, seeds, n) produce
/// identical traces, metrics and outputs.
RunResult run_program(std::uint32_t n,
                      const Program& program,
                      const WritePolicy& policy,
                      const SeedSpec& seed,
                      const RunLimits& limits = {},
                      const BitSourceFactory& source_override = nullptr);

}  // namespace anonpram
