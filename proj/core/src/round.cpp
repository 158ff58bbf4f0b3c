#include "anonpram/round.hpp"

#include <algorithm>

namespace anonpram {

RoundOutcome submit_round(std::span<const MemoryOp> ops,
                          const WritePolicy& policy,
                          SharedMemory& memory,
                          BitSource* selector_rng,
                          bool strict) {
    RoundOutcome out;
    out.reads.resize(ops.size());

    std::vector<std::pair<CellAddr, WriteAttempt>> writes;
    for (std::uint32_t i = 0; i < ops.size(); ++i) {
        if (ops[i].kind == MemoryOp::Kind::Write)
            writes.push_back({ops[i].addr, {i, ops[i].value}});
    }
    std::sort(writes.begin(), writes.end(),
              [](const auto& a, const auto& b) {
                  return a.first < b.first ||
                         (a.first == b.first && a.second.processor < b.second.processor);
              });

    if (strict && !writes.empty()) {
        for (const auto& op : ops) {
            if (op.kind != MemoryOp::Kind::Read) continue;
            auto it = std::lower_bound(writes.begin(), writes.end(), op.addr,
                                       [](const auto& w, CellAddr a) { return w.first < a; });
            if (it != writes.end() && it->first == op.addr)
                throw ModelViolation(ModelViolation::Kind::ReadWriteClash,
                                     "cell " + std::to_string(op.addr) +
                                         " both read and written in one round");
        }
    }

    // Reads see the state at the start of the round.
    for (std::uint32_t i = 0; i < ops.size(); ++i)
        if (ops[i].kind == MemoryOp::Kind::Read)
            out.reads[i] = memory.read(ops[i].addr);

    // Writes are grouped per cell, resolved, and applied at end of round.
    std::size_t i = 0;
    std::vector<WriteAttempt> group;
    while (i < writes.size()) {
        CellAddr addr = writes[i].first;
        group.clear();
        while (i < writes.size() && writes[i].first == addr) {
            group.push_back(writes[i].second);
            ++i;
        }
        CellValue v = resolve_concurrent_writes(addr, group, policy, selector_rng);
        memory.write_resolved(addr, v);
        out.written.push_back(addr);
    }

    memory.advance_round();
    return out;
}

}  // namespace anonpram
