#include "algo_internal.hpp"

#include <algorithm>

namespace anonpram::algo {

namespace {

/// Balls per bin target n/ln n used by arb-unb-lv; 1 for n = 1.
std::uint64_t unbounded_lv_bins(std::uint32_t n) {
    if (n <= 1) return 1;
    return ceil_u64(static_cast<double>(n) / std::log(static_cast<double>(n)));
}

}  // namespace

// Processors repeatedly write random tags to the shared Pad and claim
// consecutive names from Counter on a successful read-back; an attempt is
// accepted once Counter reaches n.
Program make_arbitrary_bounded_lv(std::uint32_t n, double beta) {
    const std::uint64_t range = pow_range_checked(n, beta, "arb-bnd-lv");

    Program p;
    p.memory_window = 2;
    p.body = [n, range](ProcContext& ctx) -> ProcTask {
        constexpr CellAddr kPad = 0, kCounter = 1;
        std::int64_t name = 0;
        for (;;) {
            ctx.note_outer_iteration();
            co_await ctx.write(kCounter, 0);
            name = 0;
            auto bin = static_cast<std::int64_t>(ctx.draw(range));
            for (std::uint32_t i = 0; i < n; ++i) {
                if (name == 0) {
                    co_await ctx.write(kPad, bin);
                    CellValue got = co_await ctx.read(kPad);
                    if (got == bin) {
                        CellValue c = co_await ctx.read(kCounter);
                        co_await ctx.write(kCounter, c + 1);
                        name = c + 1;
                    } else {
                        co_await ctx.idle(2);
                    }
                } else {
                    co_await ctx.idle(4);
                }
            }
            if ((co_await ctx.read(kCounter)) == static_cast<std::int64_t>(n)) break;
        }
        ctx.set_output(name);
    };
    return p;
}

// Labeled balls into n/ln n bins; positions (bin, counter) are ranked
// lexicographically through a prefix tree over the per-bin counters. An
// attempt is accepted when the maximum rank is n.
Program make_arbitrary_unbounded_lv(std::uint32_t n, double beta) {
    const std::uint64_t bins = unbounded_lv_bins(n);
    const std::uint64_t label_range = pow_range_checked(n, beta, "arb-unb-lv");

    Program p;
    p.body = [n, bins, label_range](ProcContext& ctx) -> ProcTask {
        CellAddr all_named = ctx.allocate_shared(1);
        CellAddr bin_arr = ctx.allocate_shared(bins);
        std::int64_t name = 0;
        std::uint64_t pos_bin = 0;
        for (;;) {
            ctx.note_outer_iteration();
            // Fresh zeroed counters for every attempt.
            CellAddr counter = ctx.allocate_shared(bins);
            std::uint64_t bin = ctx.draw(bins);
            auto label = static_cast<std::int64_t>(ctx.draw(label_range));
            pos_bin = 0;
            std::int64_t pos_counter = 0;
            for (;;) {
                // Some processor is always position-less while the loop
                // runs, so the position-less suffice to raise the flag.
                if (pos_bin == 0)
                    co_await ctx.write(all_named, 1);
                else
                    co_await ctx.idle(1);
                if (pos_bin == 0) {
                    co_await ctx.write(bin_arr + bin - 1, label);
                    CellValue got = co_await ctx.read(bin_arr + bin - 1);
                    if (got == label) {
                        CellValue c = co_await ctx.read(counter + bin - 1);
                        co_await ctx.write(counter + bin - 1, c + 1);
                        pos_bin = bin;
                        pos_counter = c + 1;
                        co_await ctx.idle(1);
                    } else {
                        co_await ctx.idle(2);
                        co_await ctx.write(all_named, 0);
                    }
                } else {
                    co_await ctx.idle(5);
                }
                if ((co_await ctx.read(all_named)) != 0) break;
            }
            // Rank = (balls in lower bins) + own counter value; the final
            // counters are the leaf weights.
            CellValue weight = co_await ctx.read(counter + pos_bin - 1);
            TreeLayout tree = TreeLayout::over(
                bins, ctx.allocate_shared(TreeLayout::region_size(bins)));
            PrefixCount pc = co_await tree_prefix_count(ctx, tree, pos_bin, weight);
            name = pc.prefix_below + pos_counter;
            if (pc.total == static_cast<std::int64_t>(n)) break;  // n is the maximum name
        }
        ctx.set_output({name, static_cast<std::int64_t>(pos_bin)});
    };
    return p;
}

// Shrinking/restored stages of collision-verified claiming from a common
// pool of bins. Names become final once Last-Name reaches n.
Program make_common_bounded_lv(std::uint32_t n, double beta) {
    const std::uint64_t vc_iters = ceil_u64(beta * std::log(static_cast<double>(n)));
    // Restored-stage pool n/(beta ln n). Below n ~ (beta ln n)^2 that pool
    // is smaller than the ball count it must drain, so it is floored at the
    // number of unnamed processors; at every scale where the pool formula
    // is meaningful the floor never binds.
    std::uint64_t restored =
        n <= 1 ? 1
               : ceil_u64(static_cast<double>(n) /
                          std::max(beta * std::log(static_cast<double>(n)), 1.0));

    Program p;
    p.memory_window = 5;
    p.body = [n, vc_iters, restored](ProcContext& ctx) -> ProcTask {
        constexpr CellAddr kHeads = 0, kTails = 1, kLastName = 2, kCollision = 3, kProbe = 4;
        std::int64_t name = 0;
        for (;;) {
            ctx.note_outer_iteration();
            std::uint64_t bins = n;
            name = 0;
            co_await ctx.write(kLastName, 0);
            for (;;) {
                co_await ctx.write(kCollision, 0);
                bool my_collision = false;
                std::uint64_t bin = name == 0 ? ctx.draw(bins) : 0;
                for (std::uint64_t i = 1; i <= bins; ++i) {
                    bool mine = bin == i;
                    // Occupancy probe over a register that is 0 between
                    // probes: owners write 1, everybody reads, and a read of
                    // 1 makes everybody restore the 0. Empty bins cost two
                    // rounds.
                    if (mine)
                        co_await ctx.write(kProbe, 1);
                    else
                        co_await ctx.idle(1);
                    bool occupied = (co_await ctx.read(kProbe)) != 0;
                    if (!occupied) continue;
                    co_await ctx.write(kProbe, 0);
                    if (!mine) {
                        // One nap across the whole verification block plus
                        // the two claim rounds.
                        co_await ctx.idle(vc_iters * (kVerifyCollisionRounds + 1) + 2);
                        continue;
                    }
                    for (std::uint64_t j = 0; j < vc_iters; ++j) {
                        if (co_await verify_collision(ctx, kHeads, kTails)) {
                            co_await ctx.write(kCollision, 1);
                            my_collision = true;
                        } else {
                            co_await ctx.idle(1);
                        }
                    }
                    if (!my_collision) {
                        CellValue c = co_await ctx.read(kLastName);
                        co_await ctx.write(kLastName, c + 1);
                        name = c + 1;
                    } else {
                        co_await ctx.idle(2);
                    }
                }
                CellValue last = co_await ctx.read(kLastName);
                std::uint64_t remaining = n - static_cast<std::uint64_t>(last);
                if (remaining > vc_iters)
                    bins = remaining;
                else
                    bins = std::max<std::uint64_t>(restored, std::max<std::uint64_t>(remaining, 1));
                if ((co_await ctx.read(kCollision)) == 0) break;
            }
            if ((co_await ctx.read(kLastName)) == static_cast<std::int64_t>(n)) break;
        }
        ctx.set_output(name);
    };
    return p;
}

// Every processor keeps a ball in one of (beta+1)n bins, re-throwing on each
// detected collision; when exactly n bins are occupied, bin ranks are the
// names.
Program make_common_unbounded_lv(std::uint32_t n, double beta) {
    const std::uint64_t bins = ceil_u64((beta + 1.0) * static_cast<double>(n));
    const std::uint64_t vc_steps = ceil_log2(n);

    Program p;
    p.body = [n, bins, vc_steps](ProcContext& ctx) -> ProcTask {
        CellAddr heads = ctx.allocate_shared(bins);
        CellAddr tails = ctx.allocate_shared(bins);
        std::uint64_t bin = ctx.draw(bins);
        std::int64_t name = 0;
        for (;;) {
            ctx.note_outer_iteration();
            for (std::uint64_t i = 0; i < vc_steps; ++i) {
                if (co_await verify_collision(ctx, heads + bin - 1, tails + bin - 1))
                    bin = ctx.draw(bins);
            }
            TreeLayout tree = TreeLayout::over(
                bins, ctx.allocate_shared(TreeLayout::region_size(bins)));
            PrefixCount pc = co_await tree_prefix_count(ctx, tree, bin, 1);
            if (pc.total == static_cast<std::int64_t>(n)) {
                name = pc.prefix_below + 1;
                break;
            }
        }
        ctx.set_output({name, static_cast<std::int64_t>(bin)});
    };
    return p;
}

}  // namespace anonpram::algo
