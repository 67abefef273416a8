#pragma once

#include <span>
#include <string>
#include <vector>

#include "spindet/signal_models.hpp"

namespace spindet {

struct Statistic {
  double value = 0.0;
  std::string detector_name;
};

/// First-order single-pole low-pass prefilter
///   a_i = alpha * a_{i-1} + (1-alpha)/2 * (y_i + y_{i-1})
/// with zero initial state. Unit DC gain; stable for |alpha| < 1.
class LowPassFilter {
 public:
  explicit LowPassFilter(double alpha);
  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

std::vector<double> lpf_apply(const LowPassFilter& filter,
                              std::span<const double> y);

/// |(1/N) sum y_i|
Statistic amplitude_statistic(std::span<const double> y);

/// sum y_i^2, or sum a_i^2 with a = lpf_apply(*filter, y) when a filter is
/// supplied (the filtered energy detector).
Statistic energy_statistic(std::span<const double> y,
                           const LowPassFilter* filter = nullptr);

/// sum zeta_i * y_i against the true signal realization. Unimplementable in
/// practice (the realization is never known); serves as the ROC ceiling.
Statistic matched_filter_statistic(std::span<const double> y,
                                   const SignalPath& clean);

}  // namespace spindet
