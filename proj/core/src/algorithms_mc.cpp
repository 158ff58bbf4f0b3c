#include "algo_internal.hpp"

namespace anonpram::algo {

namespace {

// Shared window layout of the Common bounded-memory Monte Carlo algorithm.
constexpr CellAddr kHeads = 0, kTails = 1, kLastName = 2, kCollision = 3,
                   kNonempty = 4, kProbe = 5;
constexpr std::uint64_t kCbmcWindow = 6;

struct CbmcState {
    std::int64_t size = 0;
    std::int64_t number_of_bins = 0;
    std::uint64_t bin = 0;
    std::int64_t name = 0;
};

// Doubles k until at most 2^k bins are occupied by the thrown balls, then
// reports size 3*2^k and bin pool k*2^k. The bins drawn in the accepted
// stage carry over into the first naming pass.
SubTask<int> cbmc_estimate_size(ProcContext& ctx, CbmcState& st) {
    std::uint64_t k = 2;
    for (;;) {
        k += 1;
        std::uint64_t nbins = k << k;
        st.bin = ctx.draw(nbins);
        co_await ctx.write(kNonempty, 0);
        for (std::uint64_t i = 1; i <= nbins; ++i) {
            bool mine = st.bin == i;
            // Occupancy probe: owners write 1, all read, a read of 1 is
            // restored to 0 by everybody. The register is 0 between probes.
            if (mine)
                co_await ctx.write(kProbe, 1);
            else
                co_await ctx.idle(1);
            bool occupied = (co_await ctx.read(kProbe)) != 0;
            if (!occupied) continue;
            co_await ctx.write(kProbe, 0);
            if (mine) {
                CellValue c = co_await ctx.read(kNonempty);
                co_await ctx.write(kNonempty, c + 1);
            } else {
                co_await ctx.idle(2);
            }
        }
        if ((co_await ctx.read(kNonempty)) <= static_cast<std::int64_t>(1ULL << k)) break;
    }
    st.size = static_cast<std::int64_t>(3ULL << k);
    st.number_of_bins = static_cast<std::int64_t>(k << k);
    co_return 0;
}

// One naming pass: every occupied bin is either claimed (no collision found
// in beta*lg(size) checks) or re-thrown into the clamped pool.
SubTask<int> cbmc_extend_names(ProcContext& ctx, double beta, CbmcState& st) {
    co_await ctx.write(kCollision, 0);
    bool my_collision = false;
    const std::uint64_t vc_iters =
        ceil_u64(beta * std::log2(static_cast<double>(st.size)));
    for (std::int64_t i = 1; i <= st.number_of_bins; ++i) {
        bool mine = st.bin == static_cast<std::uint64_t>(i);
        if (mine)
            co_await ctx.write(kProbe, 1);
        else
            co_await ctx.idle(1);
        bool occupied = (co_await ctx.read(kProbe)) != 0;
        if (!occupied) continue;  // empty bin: constant-time verification
        co_await ctx.write(kProbe, 0);
        if (!mine) {
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
            st.name = c + 1;
            st.bin = 0;
        } else {
            co_await ctx.idle(2);
        }
    }
    if (st.number_of_bins > st.size) st.number_of_bins = st.size;
    if (my_collision) st.bin = ctx.draw(static_cast<std::uint64_t>(st.number_of_bins));
    co_return 0;
}

// Tries bin ranges 2^k under the growth schedule until the occupied count
// drops to a beta-th fraction, then returns ceil(2^(k+1)/beta).
SubTask<std::int64_t> gauge_size(ProcContext& ctx, double beta, GrowthFunction growth) {
    std::uint64_t k = 1;
    for (;;) {
        k = apply_growth(growth, k);
        if (k >= 40)
            throw ConfigError("com-unb-mc: gauge bin range 2^k grew past simulator limits");
        std::uint64_t nbins = 1ULL << k;
        auto bin = static_cast<std::uint64_t>(ctx.draw_pow2(static_cast<unsigned>(k)));
        TreeLayout tree =
            TreeLayout::over(nbins, ctx.allocate_shared(TreeLayout::region_size(nbins)));
        PrefixCount pc = co_await tree_prefix_count(ctx, tree, bin, 1);
        if (static_cast<double>(pc.total) <= std::exp2(static_cast<double>(k)) / beta) break;
    }
    co_return static_cast<std::int64_t>(
        std::ceil(std::exp2(static_cast<double>(k + 1)) / beta - 1e-9));
}

}  // namespace

// Quadratically growing selection ranges [1, 2^k] with sequential Pad
// claiming; stops once the name count is at most 2^(k/beta).
Program make_arbitrary_bounded_mc(double beta) {
    Program p;
    p.memory_window = 3;
    p.body = [beta](ProcContext& ctx) -> ProcTask {
        constexpr CellAddr kPad = 0, kLast = 1, kAllNamed = 2;
        std::uint64_t k = 1;
        std::int64_t name = 0;
        for (;;) {
            ctx.note_outer_iteration();
            k *= 2;
            co_await ctx.write(kLast, 0);
            name = 0;
            std::int64_t bin = ctx.draw_pow2(static_cast<unsigned>(k));
            for (;;) {
                // Whenever the loop runs, someone is still unnamed (a loop
                // pass naming everyone reads true and exits), so the
                // unnamed suffice to raise the flag.
                if (name == 0)
                    co_await ctx.write(kAllNamed, 1);
                else
                    co_await ctx.idle(1);
                if (name == 0) {
                    co_await ctx.write(kPad, bin);
                    CellValue got = co_await ctx.read(kPad);
                    if (got == bin) {
                        CellValue c = co_await ctx.read(kLast);
                        co_await ctx.write(kLast, c + 1);
                        name = c + 1;
                        co_await ctx.idle(1);
                    } else {
                        co_await ctx.idle(2);
                        co_await ctx.write(kAllNamed, 0);
                    }
                } else {
                    co_await ctx.idle(5);
                }
                if ((co_await ctx.read(kAllNamed)) != 0) break;
            }
            if ((co_await ctx.read(kLast)) <= pow2_ratio_floor(k, beta)) break;
        }
        ctx.set_output(name);
    };
    return p;
}

// Parallel Pad/Last-Name arrays over 2^k/(beta k) bins with beta*k claim
// rounds per stage; positions are ranked once every processor holds one.
Program make_arbitrary_unbounded_mc(double beta, GrowthFunction growth) {
    Program p;
    p.body = [beta, growth](ProcContext& ctx) -> ProcTask {
        CellAddr all_named = ctx.allocate_shared(1);
        std::uint64_t k = 1;
        std::uint64_t bins = 1;
        CellAddr last_arr = 0;
        std::uint64_t pos_bin = 0;
        std::int64_t pos_counter = 0;
        for (;;) {
            ctx.note_outer_iteration();
            k = apply_growth(growth, k);
            if (k >= 62)
                throw ConfigError("arb-unb-mc: selection range 2^k grew past 62-bit values");
            bins = ceil_u64(std::exp2(static_cast<double>(k)) /
                            (beta * static_cast<double>(k)));
            if (bins == 0) bins = 1;
            CellAddr pad = ctx.allocate_shared(bins);
            last_arr = ctx.allocate_shared(bins);
            pos_bin = 0;
            pos_counter = 0;
            co_await ctx.write(all_named, 1);
            std::uint64_t bin = ctx.draw(bins);
            auto label_bits = static_cast<unsigned>(ceil_u64(beta * static_cast<double>(k)));
            std::int64_t label = ctx.draw_pow2(label_bits);
            const std::uint64_t claim_iters = ceil_u64(beta * static_cast<double>(k));
            for (std::uint64_t i = 0; i < claim_iters; ++i) {
                if (pos_bin == 0) {
                    co_await ctx.write(pad + bin - 1, label);
                    CellValue got = co_await ctx.read(pad + bin - 1);
                    if (got == label) {
                        CellValue c = co_await ctx.read(last_arr + bin - 1);
                        co_await ctx.write(last_arr + bin - 1, c + 1);
                        pos_bin = bin;
                        pos_counter = c + 1;
                    } else {
                        co_await ctx.idle(2);
                    }
                } else {
                    co_await ctx.idle(4);
                }
            }
            if (pos_bin == 0)
                co_await ctx.write(all_named, 0);
            else
                co_await ctx.idle(1);
            if ((co_await ctx.read(all_named)) != 0) break;
        }
        CellValue weight = co_await ctx.read(last_arr + pos_bin - 1);
        TreeLayout tree =
            TreeLayout::over(bins, ctx.allocate_shared(TreeLayout::region_size(bins)));
        PrefixCount pc = co_await tree_prefix_count(ctx, tree, pos_bin, weight);
        ctx.set_output({pc.prefix_below + pos_counter, static_cast<std::int64_t>(pos_bin)});
    };
    return p;
}

// Estimate-Size then up to lg(size) naming passes, returning as soon as a
// pass detects no collision.
Program make_common_bounded_mc(double beta) {
    Program p;
    p.memory_window = kCbmcWindow;
    p.body = [beta](ProcContext& ctx) -> ProcTask {
        CbmcState st;
        for (;;) {
            ctx.note_outer_iteration();
            co_await ctx.write(kLastName, 0);
            co_await cbmc_estimate_size(ctx, st);
            const std::uint64_t passes =
                ceil_u64(std::log2(static_cast<double>(st.size)));
            for (std::uint64_t pass = 0; pass < passes; ++pass) {
                co_await cbmc_extend_names(ctx, beta, st);
                if ((co_await ctx.read(kCollision)) == 0) {
                    ctx.set_output(st.name);
                    co_return;
                }
            }
        }
    };
    return p;
}

// Gauge-Size, then beta*lg(size) re-throwing checks followed by beta*lg(size)
// pure checks; bin ranks become names when the pure checks stay silent.
Program make_common_unbounded_mc(double beta, GrowthFunction growth) {
    Program p;
    p.body = [beta, growth](ProcContext& ctx) -> ProcTask {
        CellAddr collision_cell = ctx.allocate_shared(1);
        std::uint64_t bins = 1;
        std::uint64_t bin = 0;
        for (;;) {
            ctx.note_outer_iteration();
            std::int64_t size = co_await gauge_size(ctx, beta, growth);
            bins = static_cast<std::uint64_t>(3 * size);
            CellAddr heads = ctx.allocate_shared(bins);
            CellAddr tails = ctx.allocate_shared(bins);
            bin = ctx.draw(bins);
            const std::uint64_t vc_iters =
                ceil_u64(beta * std::log2(static_cast<double>(size)));
            for (std::uint64_t i = 0; i < vc_iters; ++i) {
                if (co_await verify_collision(ctx, heads + bin - 1, tails + bin - 1))
                    bin = ctx.draw(bins);
            }
            co_await ctx.write(collision_cell, 0);
            for (std::uint64_t i = 0; i < vc_iters; ++i) {
                if (co_await verify_collision(ctx, heads + bin - 1, tails + bin - 1))
                    co_await ctx.write(collision_cell, 1);
                else
                    co_await ctx.idle(1);
            }
            if ((co_await ctx.read(collision_cell)) == 0) break;
        }
        TreeLayout tree =
            TreeLayout::over(bins, ctx.allocate_shared(TreeLayout::region_size(bins)));
        PrefixCount pc = co_await tree_prefix_count(ctx, tree, bin, 1);
        ctx.set_output({pc.prefix_below + 1, static_cast<std::int64_t>(bin)});
    };
    return p;
}

Program make_estimate_size_probe() {
    Program p;
    p.memory_window = kCbmcWindow;
    p.body = [](ProcContext& ctx) -> ProcTask {
        CbmcState st;
        co_await cbmc_estimate_size(ctx, st);
        ctx.set_output({st.size, st.number_of_bins});
    };
    return p;
}

Program make_gauge_size_probe(double beta, GrowthFunction growth) {
    Program p;
    p.body = [beta, growth](ProcContext& ctx) -> ProcTask {
        std::int64_t size = co_await gauge_size(ctx, beta, growth);
        ctx.set_output(size);
    };
    return p;
}

}  // namespace anonpram::algo
