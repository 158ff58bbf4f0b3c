#include "anonpram/stats.hpp"

#include <cmath>

namespace anonpram::stats {

namespace {
// Two-sided 99%: Phi^-1(0.995).
constexpr double kZ99 = 2.5758293035489004;
}  // namespace

WilsonInterval estimate_probability(std::uint64_t successes, std::uint64_t trials) {
    if (trials == 0) throw ConfigError("estimate_probability: trials must be >= 1");
    if (successes > trials)
        throw ConfigError("estimate_probability: successes exceed trials");

    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = kZ99 * kZ99;
    double denom = 1.0 + z2 / n;
    double center = (p + z2 / (2.0 * n)) / denom;
    double half = kZ99 * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;

    WilsonInterval w;
    w.point = p;
    w.lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
    w.upper = successes == trials ? 1.0 : std::min(1.0, center + half);
    return w;
}

const char* to_string(ScalingModel m) {
    switch (m) {
        case ScalingModel::Log: return "log";
        case ScalingModel::Linear: return "linear";
        case ScalingModel::NLog: return "nlog";
        case ScalingModel::LogSquared: return "logsq";
    }
    return "?";
}

namespace {
double shape(ScalingModel m, double n) {
    switch (m) {
        case ScalingModel::Log: return std::log2(n);
        case ScalingModel::Linear: return n;
        case ScalingModel::NLog: return n * std::log2(n);
        case ScalingModel::LogSquared: {
            double l = std::log2(n);
            return l * l;
        }
    }
    return 0;
}
}  // namespace

ScalingFit fit_scaling(std::span<const std::pair<double, double>> points, ScalingModel model) {
    if (points.size() < 3)
        throw ConfigError("fit_scaling: need at least 3 points");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].first <= points[i - 1].first)
            throw ConfigError("fit_scaling: n values must be strictly increasing");

    double first_y = points.front().second;
    bool all_equal = true;
    for (const auto& [n, y] : points)
        if (y != first_y) all_equal = false;
    if (all_equal) throw DegenerateFit();

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    auto m = static_cast<double>(points.size());
    for (const auto& [n, y] : points) {
        double x = shape(model, n);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = m * sxx - sx * sx;
    ScalingFit fit;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;

    double ss_res = 0, ss_tot = 0;
    double ybar = sy / m;
    for (const auto& [n, y] : points) {
        double pred = fit.intercept + fit.slope * shape(model, n);
        ss_res += (y - pred) * (y - pred);
        ss_tot += (y - ybar) * (y - ybar);
    }
    fit.r_squared = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return fit;
}

}  // namespace anonpram::stats
