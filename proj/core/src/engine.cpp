#include "anonpram/engine.hpp"

#include <algorithm>
#include <queue>

namespace anonpram {

namespace {

struct WakeEntry {
    std::int64_t round;
    std::uint32_t proc;
    bool operator>(const WakeEntry& o) const {
        return round > o.round || (round == o.round && proc > o.proc);
    }
};

}  // namespace

class Engine {
public:
    Engine(std::uint32_t n,
           const Program& program,
           const WritePolicy& policy,
           const SeedSpec& seed,
           const RunLimits& limits,
           const BitSourceFactory& source_override)
        : policy_(policy),
          limits_(limits),
          strict_(limits.strict_mode),
          memory_(program.memory_window, limits.cell_limit),
          selector_rng_(mix_seed(seed.trial_seed(), 2)) {
        std::uint64_t per_proc_base = mix_seed(seed.trial_seed(), 1);
        procs_.resize(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            auto& p = procs_[i];
            p.ctx.engine_ = this;
            p.ctx.bits_ = source_override
                              ? source_override(i)
                              : std::make_unique<SplitMixSource>(mix_seed(per_proc_base, i));
            p.task = program.body(p.ctx);
            p.ctx.resume_point_ = p.task.handle();
        }
    }

    CellAddr allocate_shared(ProcContext& ctx, std::uint64_t cells) {
        std::uint32_t idx = ctx.alloc_index_++;
        if (idx < allocations_.size()) {
            if (allocations_[idx].second != cells)
                throw std::logic_error(
                    "lock-step allocation mismatch: processors disagree on region size");
            return allocations_[idx].first;
        }
        if (idx != allocations_.size())
            throw std::logic_error("lock-step allocation out of order");
        CellAddr base = memory_.allocate_region(cells);
        allocations_.emplace_back(base, cells);
        return base;
    }

    RunResult run() {
        const std::uint32_t n = static_cast<std::uint32_t>(procs_.size());
        live_ = n;

        // Start every processor; the first suspension yields its op for
        // round 0.
        for (std::uint32_t i = 0; i < n; ++i) resume_proc(i, -1);

        bool completed = true;
        std::int64_t round = 0;
        while (live_ > 0) {
            if (awake_.empty()) {
                // Everyone is in a long nap: fast-forward the all-NoOp rounds.
                std::int64_t next = sleepers_.top().round;
                if (capped(next)) {
                    std::int64_t executed = cap_round() - round;
                    if (executed > 0) memory_.advance_round(static_cast<std::uint64_t>(executed));
                    round = cap_round();
                    completed = false;
                    break;
                }
                memory_.advance_round(static_cast<std::uint64_t>(next - round));
                round = next;
            } else if (capped(round)) {
                completed = false;
                break;
            }

            wake_sleepers(round);
            execute_ops();

            std::size_t n_awake = awake_.size();
            std::size_t n_waking = waking_.size();
            next_awake_.clear();
            for (std::size_t i = 0; i < n_awake; ++i) {
                std::uint32_t idx = awake_[i];
                if (procs_[idx].ctx.skip_ > 0)
                    next_awake_.push_back(idx);
                else
                    resume_proc(idx, round);
            }
            for (std::size_t i = 0; i < n_waking; ++i) resume_proc(waking_[i], round);
            waking_.clear();
            awake_.swap(next_awake_);

            memory_.advance_round();
            ++round;
        }

        RunResult result;
        result.completed = completed;
        result.metrics.rounds = static_cast<std::uint64_t>(round);
        result.metrics.cells_touched = memory_.cells_touched();
        result.outputs.reserve(n);
        result.metrics.bits_per_processor.reserve(n);
        for (auto& p : procs_) {
            result.outputs.push_back(std::move(p.ctx.outputs_));
            std::uint64_t b = p.ctx.bits_->bits_consumed();
            result.metrics.bits_per_processor.push_back(b);
            result.metrics.random_bits += b;
            result.metrics.random_bits_nominal += p.ctx.bits_->bits_nominal();
            result.metrics.outer_iterations =
                std::max(result.metrics.outer_iterations, p.ctx.outer_iterations_);
        }
        return result;
    }

private:
    struct Proc {
        ProcTask task;
        ProcContext ctx;
    };

    bool capped(std::int64_t round) const {
        return limits_.round_cap != 0 &&
               round >= static_cast<std::int64_t>(limits_.round_cap);
    }
    std::int64_t cap_round() const { return static_cast<std::int64_t>(limits_.round_cap); }

    void wake_sleepers(std::int64_t round) {
        while (!sleepers_.empty() && sleepers_.top().round <= round) {
            waking_.push_back(sleepers_.top().proc);
            sleepers_.pop();
        }
    }

    // Collects this round's ops from awake processors, performs all reads
    // against start-of-round state, then resolves and applies writes.
    // Processors inside a short idle decrement their skip counter instead.
    void execute_ops() {
        writes_.clear();
        bool any_read = false;
        for (std::uint32_t idx : awake_) {
            auto& ctx = procs_[idx].ctx;
            if (ctx.skip_ > 0) {
                --ctx.skip_;
                continue;
            }
            const MemoryOp& op = ctx.pending_;
            if (op.kind == MemoryOp::Kind::Write)
                writes_.push_back({op.addr, {idx, op.value}});
            else if (op.kind == MemoryOp::Kind::Read)
                any_read = true;
        }
        std::sort(writes_.begin(), writes_.end(), [](const auto& a, const auto& b) {
            return a.first < b.first ||
                   (a.first == b.first && a.second.processor < b.second.processor);
        });

        if (strict_ && any_read && !writes_.empty()) {
            for (std::uint32_t idx : awake_) {
                const MemoryOp& op = procs_[idx].ctx.pending_;
                if (op.kind != MemoryOp::Kind::Read) continue;
                auto it = std::lower_bound(
                    writes_.begin(), writes_.end(), op.addr,
                    [](const auto& w, CellAddr a) { return w.first < a; });
                if (it != writes_.end() && it->first == op.addr)
                    throw ModelViolation(ModelViolation::Kind::ReadWriteClash,
                                         "cell " + std::to_string(op.addr) +
                                             " both read and written in one round");
            }
        }

        if (any_read) {
            for (std::uint32_t idx : awake_) {
                auto& ctx = procs_[idx].ctx;
                if (ctx.pending_.kind == MemoryOp::Kind::Read)
                    ctx.read_result_ = memory_.read(ctx.pending_.addr);
            }
        }

        std::size_t i = 0;
        while (i < writes_.size()) {
            CellAddr addr = writes_[i].first;
            group_.clear();
            while (i < writes_.size() && writes_[i].first == addr) {
                group_.push_back(writes_[i].second);
                ++i;
            }
            CellValue v = resolve_concurrent_writes(addr, group_, policy_, &selector_rng_);
            memory_.write_resolved(addr, v);
        }
    }

    // Resumes processor `idx` after its round-`at_round` action and files it
    // according to the operation it suspends on next. Short idles stay in
    // the awake list behind a skip counter; long ones go to the sleep heap.
    static constexpr std::uint64_t kMaxSkipIdle = 16;

    void resume_proc(std::uint32_t idx, std::int64_t at_round) {
        auto& p = procs_[idx];
        p.ctx.resume_point_.resume();
        if (p.task.done()) {
            p.task.rethrow_if_failed();
            --live_;
            return;
        }
        if (p.ctx.idle_rounds_ > kMaxSkipIdle) {
            sleepers_.push({at_round + static_cast<std::int64_t>(p.ctx.idle_rounds_), idx});
            return;
        }
        p.ctx.skip_ = static_cast<std::uint32_t>(p.ctx.idle_rounds_);
        if (at_round < 0)
            awake_.push_back(idx);
        else
            next_awake_.push_back(idx);
    }

    WritePolicy policy_;
    RunLimits limits_;
    bool strict_ = true;
    SharedMemory memory_;
    SplitMixSource selector_rng_;
    std::vector<Proc> procs_;
    std::vector<std::pair<CellAddr, std::uint64_t>> allocations_;

    std::vector<std::uint32_t> awake_, next_awake_, waking_;
    std::priority_queue<WakeEntry, std::vector<WakeEntry>, std::greater<WakeEntry>> sleepers_;
    std::vector<std::pair<CellAddr, WriteAttempt>> writes_;
    std::vector<WriteAttempt> group_;
    std::uint32_t live_ = 0;
};

CellAddr ProcContext::allocate_shared(std::uint64_t cells) {
    return engine_->allocate_shared(*this, cells);
}

RunResult run_program(std::uint32_t n,
                      const Program& program,
                      const WritePolicy& policy,
                      const SeedSpec& seed,
                      const RunLimits& limits,
                      const BitSourceFactory& source_override) {
    if (n == 0) throw ConfigError("run_program: need at least one processor");
    Engine engine(n, program, policy, seed, limits, source_override);
    return engine.run();
}

}  // namespace anonpram
