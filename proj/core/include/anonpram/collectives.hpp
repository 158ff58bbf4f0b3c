#pragma once

#include <cstdint>

#include "anonpram/coro.hpp"
#include "anonpram/engine.hpp"

namespace anonpram {

/// Addressing of a binary reduction tree over m bins, laid out in a fresh
/// region of 2 * 2^ceil(lg m) cells. Bins occupy the leaves; internal nodes
/// sit below them in heap order (node 1 is the root). Bin counts that are
/// not powers of two are padded with permanently empty leaves.
struct TreeLayout {
    CellAddr base = 0;
    std::uint64_t padded_leaves = 1;
    std::uint32_t levels = 0;

    static std::uint64_t pad_leaves(std::uint64_t m) {
        std::uint64_t p = 1;
        while (p < m) p *= 2;
        return p;
    }

    /// Cells needed for a tree over m bins.
    static std::uint64_t region_size(std::uint64_t m) { return 2 * pad_leaves(m); }

    static TreeLayout over(std::uint64_t m, CellAddr base) {
        TreeLayout t;
        t.base = base;
        t.padded_leaves = pad_leaves(m);
        t.levels = 0;
        while ((1ULL << t.levels) < t.padded_leaves) ++t.levels;
        return t;
    }

    /// Heap index of the leaf for 1-based bin i.
    std::uint64_t leaf_node(std::uint64_t bin) const { return padded_leaves + bin - 1; }
    CellAddr cell(std::uint64_t node) const { return base + node; }

    /// Rounds one traversal takes, identical for every processor.
    std::uint64_t rounds() const { return 2ULL * levels + 2; }
};

struct PrefixCount {
    /// Sum of all leaf values (every processor learns this).
    std::int64_t total = 0;
    /// Sum of leaf values strictly below this participant's leaf
    /// (meaningful for participants only).
    std::int64_t prefix_below = 0;
};

/// One bottom-up traversal of a fresh tree. Participants sit at `leaf`
/// (1-based; 0 = not participating) holding `value`; processors sharing a
/// leaf must hold identical values, keeping every concurrent write
/// identical-valued and therefore Common-legal. Costs layout.rounds()
/// rounds for every processor, participating or not.
SubTask<PrefixCount> tree_prefix_count(ProcContext& ctx, TreeLayout layout,
                                       std::uint64_t leaf, std::int64_t value);

/// Number of occupied bins; every processor learns the total. Processors
/// without a bin pass leaf = 0.
SubTask<std::int64_t> count_occupied(ProcContext& ctx, TreeLayout layout, std::uint64_t leaf);

/// Rank of this participant's bin among occupied bins (1 = smallest).
/// Non-participants (leaf = 0) get 0. The `total` out-parameter mirror is
/// folded into PrefixCount; use tree_prefix_count when both are needed.
SubTask<std::int64_t> compute_rank(ProcContext& ctx, TreeLayout layout, std::uint64_t leaf);

/// Global OR over one scratch cell: clear, conditional identical write of 1,
/// read. Exactly kGlobalOrRounds rounds for every processor.
SubTask<bool> global_or(ProcContext& ctx, CellAddr scratch, bool flag);

inline constexpr std::uint64_t kGlobalOrRounds = 3;

}  // namespace anonpram
