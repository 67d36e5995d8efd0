#pragma once

#include <cstddef>
#include <span>

namespace tanglesim {

// Ordinary least squares y = slope * x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
    double sse = 0.0;
    std::size_t n = 0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Mean / standard deviation of a piecewise-constant signal where value i
// holds over a duration of weight i.
struct WeightedStats {
    double mean = 0.0;
    double stddev = 0.0;
};

WeightedStats weighted_stats(std::span<const double> values, std::span<const double> weights);

WeightedStats sample_stats(std::span<const double> values);

}  // namespace tanglesim
