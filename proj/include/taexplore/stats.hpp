#pragma once

#include <optional>
#include <span>
#include <vector>

namespace taexplore {

// Trailing window mean, partial at the start:
// out[i] = mean(series[max(0, i - window + 1) .. i]).
std::vector<double> moving_average(std::span<const double> series,
                                   int window = 50);

enum class MetricSense { kLowerIsBetter, kHigherIsBetter };

// First index whose moving average is at or past `threshold` in the
// direction of improvement.
std::optional<int> episodes_to_threshold(std::span<const double> series,
                                         double threshold, MetricSense sense,
                                         int window = 50);

// Level that counts as reaching `fraction` of a reference performance:
// reference relaxed by (1 - fraction) * |reference| in the worse direction.
double relative_threshold(double reference, double fraction, MetricSense sense);

double mean_of(std::span<const double> xs);
// Mean of the last `count` entries (all of them if fewer).
double tail_mean(std::span<const double> xs, int count);
// Ordinary least-squares slope of ys against 0, 1, 2, ...
double least_squares_slope(std::span<const double> ys);

struct MeanAndError {
  double mean = 0.0;
  double stderr_ = 0.0;
};
// Sample standard error (n - 1 denominator); 0 for a single value.
MeanAndError mean_and_stderr(std::span<const double> xs);

}  // namespace taexplore
