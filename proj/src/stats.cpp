#include "tanglesim/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace tanglesim {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
    if (x.size() < 2) throw std::invalid_argument("fit_line: need at least two points");
    const std::size_t n = x.size();
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate x range");

    LineFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.sse = syy - fit.slope * sxy;
    if (fit.sse < 0.0) fit.sse = 0.0;  // guard rounding
    fit.r2 = syy > 0.0 ? 1.0 - fit.sse / syy : 1.0;
    fit.slope_stderr =
        n > 2 ? std::sqrt(fit.sse / (static_cast<double>(n - 2) * sxx)) : 0.0;
    return fit;
}

WeightedStats weighted_stats(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size())
        throw std::invalid_argument("weighted_stats: size mismatch");
    if (values.empty()) throw std::invalid_argument("weighted_stats: empty input");
    double wsum = 0, acc = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        wsum += weights[i];
        acc += weights[i] * values[i];
    }
    if (wsum <= 0.0) throw std::invalid_argument("weighted_stats: nonpositive total weight");
    WeightedStats s;
    s.mean = acc / wsum;
    double var = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = values[i] - s.mean;
        var += weights[i] * d * d;
    }
    s.stddev = std::sqrt(var / wsum);
    return s;
}

WeightedStats sample_stats(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("sample_stats: empty input");
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    return {mean, std::sqrt(var)};
}

}  // namespace tanglesim
