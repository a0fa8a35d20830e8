#include "taexplore/stats.hpp"

#include <cmath>
#include <numeric>

#include "taexplore/mdp.hpp"

namespace taexplore {

std::vector<double> moving_average(std::span<const double> series, int window) {
  if (window < 1) throw ContractViolation("moving_average: window must be >= 1");
  const auto w = static_cast<std::size_t>(window);
  std::vector<double> out(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    const std::size_t lo = i + 1 >= w ? i + 1 - w : 0;
    double sum = 0.0;
    for (std::size_t k = lo; k <= i; ++k) sum += series[k];
    out[i] = sum / static_cast<double>(i - lo + 1);
  }
  return out;
}

std::optional<int> episodes_to_threshold(std::span<const double> series,
                                         double threshold, MetricSense sense,
                                         int window) {
  const std::vector<double> ma = moving_average(series, window);
  for (std::size_t i = 0; i < ma.size(); ++i) {
    const bool crossed = sense == MetricSense::kLowerIsBetter
                             ? ma[i] <= threshold
                             : ma[i] >= threshold;
    if (crossed) return static_cast<int>(i);
  }
  return std::nullopt;
}

double relative_threshold(double reference, double fraction,
                          MetricSense sense) {
  const double slack = (1.0 - fraction) * std::abs(reference);
  return sense == MetricSense::kLowerIsBetter ? reference + slack
                                              : reference - slack;
}

double mean_of(std::span<const double> xs) {
  if (xs.empty()) throw ContractViolation("mean_of: empty input");
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double tail_mean(std::span<const double> xs, int count) {
  const std::size_t n = std::min(xs.size(), static_cast<std::size_t>(count));
  return mean_of(xs.subspan(xs.size() - n));
}

double least_squares_slope(std::span<const double> ys) {
  const std::size_t n = ys.size();
  if (n < 2) throw ContractViolation("least_squares_slope: need >= 2 points");
  const double x_mean = 0.5 * static_cast<double>(n - 1);
  const double y_mean = mean_of(ys);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = static_cast<double>(i) - x_mean;
    sxy += dx * (ys[i] - y_mean);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

MeanAndError mean_and_stderr(std::span<const double> xs) {
  MeanAndError out;
  out.mean = mean_of(xs);
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  const double var = ss / static_cast<double>(xs.size() - 1);
  out.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

}  // namespace taexplore
