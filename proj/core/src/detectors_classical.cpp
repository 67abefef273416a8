#include "spindet/detectors_classical.hpp"

#include <cmath>
#include <stdexcept>

namespace spindet {

LowPassFilter::LowPassFilter(double alpha) : alpha_(alpha) {
  if (!(std::abs(alpha) < 1.0)) {
    throw std::invalid_argument("LowPassFilter: |alpha| < 1 required");
  }
}

std::vector<double> lpf_apply(const LowPassFilter& filter,
                              std::span<const double> y) {
  const double alpha = filter.alpha();
  const double gain = 0.5 * (1.0 - alpha);
  std::vector<double> a(y.size());
  double state = 0.0;
  double y_prev = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    state = alpha * state + gain * (y[i] + y_prev);
    y_prev = y[i];
    a[i] = state;
  }
  return a;
}

Statistic amplitude_statistic(std::span<const double> y) {
  if (y.empty()) {
    throw std::invalid_argument("amplitude_statistic: empty input");
  }
  double sum = 0.0;
  for (double v : y) sum += v;
  return Statistic{std::abs(sum / static_cast<double>(y.size())), "amplitude"};
}

Statistic energy_statistic(std::span<const double> y,
                           const LowPassFilter* filter) {
  if (y.empty()) {
    throw std::invalid_argument("energy_statistic: empty input");
  }
  double total = 0.0;
  if (filter == nullptr) {
    for (double v : y) total += v * v;
    return Statistic{total, "energy"};
  }
  const double alpha = filter->alpha();
  const double gain = 0.5 * (1.0 - alpha);
  double state = 0.0;
  double y_prev = 0.0;
  for (double v : y) {
    state = alpha * state + gain * (v + y_prev);
    y_prev = v;
    total += state * state;
  }
  return Statistic{total, "filtered-energy"};
}

Statistic matched_filter_statistic(std::span<const double> y,
                                   const SignalPath& clean) {
  if (y.size() != clean.values.size()) {
    throw std::invalid_argument(
        "matched_filter_statistic: observation/path length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    total += clean.values[i] * y[i];
  }
  return Statistic{total, "mf"};
}

}  // namespace spindet
