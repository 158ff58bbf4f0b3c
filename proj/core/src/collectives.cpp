#include "anonpram/collectives.hpp"

namespace anonpram {

SubTask<PrefixCount> tree_prefix_count(ProcContext& ctx, TreeLayout layout,
                                       std::uint64_t leaf, std::int64_t value) {
    PrefixCount out;
    if (leaf == 0) {
        // Non-participant: keep pace, then pick up the total at the root.
        co_await ctx.idle(2ULL * layout.levels + 1);
        out.total = co_await ctx.read(layout.cell(1));
        co_return out;
    }

    // Climb leaf-to-root. At each level write the subtree sum at the current
    // node, then read the sibling's: processors arriving at one node from
    // different children hold the same subtree sum, so concurrent writes are
    // identical. Empty subtrees read as 0 from the fresh region.
    std::uint64_t node = layout.leaf_node(leaf);
    std::int64_t sum = value;
    for (std::uint32_t level = 0; level < layout.levels; ++level) {
        co_await ctx.write(layout.cell(node), sum);
        std::int64_t sibling = co_await ctx.read(layout.cell(node ^ 1));
        if (node & 1) out.prefix_below += sibling;  // right child: left subtree precedes us
        sum += sibling;
        node >>= 1;
    }
    co_await ctx.write(layout.cell(1), sum);
    out.total = co_await ctx.read(layout.cell(1));
    co_return out;
}

SubTask<std::int64_t> count_occupied(ProcContext& ctx, TreeLayout layout, std::uint64_t leaf) {
    PrefixCount pc = co_await tree_prefix_count(ctx, layout, leaf, 1);
    co_return pc.total;
}

SubTask<std::int64_t> compute_rank(ProcContext& ctx, TreeLayout layout, std::uint64_t leaf) {
    PrefixCount pc = co_await tree_prefix_count(ctx, layout, leaf, 1);
    co_return leaf == 0 ? 0 : pc.prefix_below + 1;
}

SubTask<bool> global_or(ProcContext& ctx, CellAddr scratch, bool flag) {
    co_await ctx.write(scratch, 0);
    if (flag)
        co_await ctx.write(scratch, 1);
    else
        co_await ctx.idle(1);
    co_return (co_await ctx.read(scratch)) != 0;
}

}  // namespace anonpram
