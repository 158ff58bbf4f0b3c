#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "anonpram/types.hpp"

namespace anonpram {

/// Shared memory of the simulated PRAM.
///
/// Every cell reads as 0 until written. Addresses are handed out by
/// allocate_region, which never reuses space, so fresh regions are zeroed by
/// construction. The set of cells ever read or written is tracked for the
/// memory metrics. When a window is configured (bounded-memory algorithms),
/// any access at or beyond the window is a model violation.
class SharedMemory {
public:
    explicit SharedMemory(std::optional<std::uint64_t> window = std::nullopt,
                          std::uint64_t cell_limit = kDefaultCellLimit)
        : window_(window), cell_limit_(cell_limit) {
        if (window_) {
            cursor_ = 0;
            ensure(*window_);
        }
    }

    /// Value of `addr` at the current point in time; marks the cell touched.
    CellValue read(CellAddr addr) {
        check_window(addr);
        ensure(addr + 1);
        touch(addr);
        return cells_[addr];
    }

    /// Engine-side store of an already-resolved value.
    void write_resolved(CellAddr addr, CellValue value) {
        check_window(addr);
        ensure(addr + 1);
        touch(addr);
        cells_[addr] = value;
    }

    /// Returns the base of a never-touched, zero-initialized region of
    /// `size` cells and advances the allocation cursor.
    CellAddr allocate_region(std::uint64_t size) {
        if (size == 0) size = 1;
        if (window_ && cursor_ + size > *window_)
            throw ModelViolation(ModelViolation::Kind::WindowExceeded,
                                 "allocation of " + std::to_string(size) +
                                     " cells exceeds memory window of " +
                                     std::to_string(*window_));
        CellAddr base = cursor_;
        ensure(cursor_ + size);
        cursor_ += size;
        return base;
    }

    std::uint64_t cells_touched() const { return touched_count_; }
    std::uint64_t allocation_cursor() const { return cursor_; }
    std::optional<std::uint64_t> window() const { return window_; }

    /// Rounds executed against this memory (submit_round increments it).
    std::uint64_t rounds_elapsed() const { return rounds_; }
    void advance_round(std::uint64_t n = 1) { rounds_ += n; }

private:
    static constexpr std::uint64_t kDefaultCellLimit = 1ULL << 26;

    void check_window(CellAddr addr) const {
        if (window_ && addr >= *window_)
            throw ModelViolation(ModelViolation::Kind::WindowExceeded,
                                 "access at address " + std::to_string(addr) +
                                     " outside memory window of " +
                                     std::to_string(*window_));
    }

    void ensure(std::uint64_t size) {
        if (size > cell_limit_)
            throw ModelViolation(ModelViolation::Kind::AddressSpaceExhausted,
                                 "simulation needs " + std::to_string(size) +
                                     " cells, above the configured limit of " +
                                     std::to_string(cell_limit_));
        if (cells_.size() < size) {
            std::uint64_t grown = cells_.empty() ? 64 : cells_.size();
            while (grown < size) grown *= 2;
            if (grown > cell_limit_) grown = size;
            cells_.resize(grown, 0);
            touched_.resize(grown, 0);
        }
    }

    void touch(CellAddr addr) {
        if (!touched_[addr]) {
            touched_[addr] = 1;
            ++touched_count_;
        }
    }

    std::vector<CellValue> cells_;
    std::vector<std::uint8_t> touched_;
    std::uint64_t touched_count_ = 0;
    std::uint64_t cursor_ = 0;
    std::uint64_t rounds_ = 0;
    std::optional<std::uint64_t> window_;
    std::uint64_t cell_limit_;
};

}  // namespace anonpram
