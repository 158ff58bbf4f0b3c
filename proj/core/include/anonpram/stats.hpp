#pragma once

#include <cstdint>
#include <span>
#include <utility>

#include "anonpram/types.hpp"

namespace anonpram::stats {

/// Wilson score interval at 99% confidence.
struct WilsonInterval {
    double point = 0;
    double lower = 0;
    double upper = 0;
};

/// Point estimate and Wilson 99% interval for successes/trials.
WilsonInterval estimate_probability(std::uint64_t successes, std::uint64_t trials);

/// Shape functions the scaling checks fit against.
enum class ScalingModel : std::uint8_t {
    Log,         ///< y = a + b * lg n
    Linear,      ///< y = a + b * n
    NLog,        ///< y = a + b * n lg n
    LogSquared,  ///< y = a + b * (lg n)^2
};

const char* to_string(ScalingModel m);

struct ScalingFit {
    double intercept = 0;
    double slope = 0;
    double r_squared = 0;
};

/// Thrown when the metric carries no signal to fit (all values equal).
class DegenerateFit : public std::runtime_error {
public:
    DegenerateFit() : std::runtime_error("fit_scaling: all metric values are equal") {}
};

/// Least-squares fit of `mean metric` against the model's shape function.
/// Points are (n, metric), n strictly increasing, at least 3 of them.
ScalingFit fit_scaling(std::span<const std::pair<double, double>> points, ScalingModel model);

}  // namespace anonpram::stats
