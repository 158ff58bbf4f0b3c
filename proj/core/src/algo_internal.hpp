#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "anonpram/algorithms.hpp"

namespace anonpram::algo {

inline std::uint64_t ceil_log2(std::uint64_t x) {
    std::uint64_t w = 0;
    while ((1ULL << w) < x) ++w;
    return w;
}

inline std::uint64_t ceil_u64(double x) {
    if (x <= 0) return 0;
    return static_cast<std::uint64_t>(std::ceil(x - 1e-9));
}

/// ceil(n^beta) with a guard keeping cell values inside 62 bits.
inline std::uint64_t pow_range_checked(std::uint32_t n, double beta, const char* what) {
    double v = std::pow(static_cast<double>(n), beta);
    if (!(v < 4.6e18) || beta * std::log2(static_cast<double>(n) + 1e-12) > 62.0)
        throw ConfigError(std::string(what) +
                          ": selection range n^beta exceeds 62-bit cell values; "
                          "choose a smaller n or beta");
    std::uint64_t r = static_cast<std::uint64_t>(std::ceil(v - 1e-9));
    return r == 0 ? 1 : r;
}

/// floor(2^(k/beta)) as the Last-Name termination threshold.
inline std::int64_t pow2_ratio_floor(std::uint64_t k, double beta) {
    double e = static_cast<double>(k) / beta;
    if (e >= 62.0) return std::numeric_limits<std::int64_t>::max();
    return static_cast<std::int64_t>(std::floor(std::exp2(e) + 1e-9));
}

// Program factories, one per algorithm (see the matching .cpp files).
Program make_arbitrary_bounded_lv(std::uint32_t n, double beta);
Program make_arbitrary_unbounded_lv(std::uint32_t n, double beta);
Program make_common_bounded_lv(std::uint32_t n, double beta);
Program make_common_unbounded_lv(std::uint32_t n, double beta);
Program make_arbitrary_bounded_mc(double beta);
Program make_arbitrary_unbounded_mc(double beta, GrowthFunction growth);
Program make_common_bounded_mc(double beta);
Program make_common_unbounded_mc(double beta, GrowthFunction growth);

}  // namespace anonpram::algo
