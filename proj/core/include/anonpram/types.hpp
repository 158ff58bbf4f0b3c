#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace anonpram {

/// Address of a shared memory cell. The address space is unbounded in the
/// model; bounded-memory algorithms confine themselves to a small window.
using CellAddr = std::uint64_t;

/// Value stored in a shared memory cell. Cells are conceptually unbounded
/// integers; every algorithm here needs O(log n) bits per cell, so a 64-bit
/// word suffices. Configurations that would overflow are rejected up front.
using CellValue = std::int64_t;

/// Growth schedule r(k) for the unbounded-memory Monte Carlo algorithms.
enum class GrowthFunction : std::uint8_t {
    Successor,  ///< r(k) = k + 1
    Doubling,   ///< r(k) = 2k
};

inline std::uint64_t apply_growth(GrowthFunction g, std::uint64_t k) {
    return g == GrowthFunction::Successor ? k + 1 : 2 * k;
}

/// A violation of the PRAM model itself, as opposed to an algorithm failing.
/// These abort the trial; the harness reports them as a distinct outcome.
class ModelViolation : public std::runtime_error {
public:
    enum class Kind : std::uint8_t {
        IllegalCommonWrite,  ///< concurrent writes of distinct values under Common
        ReadWriteClash,      ///< same cell read and written in one round (strict mode)
        WindowExceeded,      ///< bounded-memory window overrun
        AddressSpaceExhausted,
    };

    ModelViolation(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Invalid experiment or algorithm configuration, rejected before any
/// execution starts.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace anonpram
