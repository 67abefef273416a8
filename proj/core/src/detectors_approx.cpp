#include "spindet/detectors_approx.hpp"

#include <cmath>
#include <stdexcept>

namespace spindet {

HybridConstants hybrid_constants(double p, double q, double amplitude,
                                 double sigma, double alpha) {
  if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("hybrid_constants: p, q must lie in (0, 1)");
  }
  if (!(amplitude > 0.0) || !(sigma > 0.0)) {
    throw std::invalid_argument("hybrid_constants: A and sigma must be > 0");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("hybrid_constants: alpha must lie in (0, 1)");
  }
  const double r = p + q - 1.0;
  const double snr_factor = amplitude / (sigma * sigma);
  HybridConstants c{};
  c.r = r;
  c.c_m = (p - q) / (2.0 - p - q);
  c.c_i = (p - q) * sigma * sigma / (4.0 * q * (1.0 - r) * amplitude);
  c.c_ii = r * (1.0 - q) / (2.0 * q * (1.0 - r));
  c.scale_c = 4.0 * q * (1.0 - q) * snr_factor * snr_factor / (1.0 - r);
  c.gain_d = (1.0 - alpha * alpha) / (2.0 * alpha);
  return c;
}

namespace {

// Running evaluation of sum_k y_k * m_k with m_k = x (m_{k-1} + y_{k-1}):
// expands to sum_{j<k} x^{k-j} y_j y_k without the O(N^2) double loop.
struct CrossAndSquares {
  double cross = 0.0;
  double squares = 0.0;
  double linear = 0.0;
};

CrossAndSquares accumulate_forms(std::span<const double> y, double x) {
  CrossAndSquares acc;
  double m = 0.0;
  double prev = 0.0;
  for (double v : y) {
    m = x * (m + prev);
    acc.cross += v * m;
    acc.squares += v * v;
    acc.linear += v;
    prev = v;
  }
  return acc;
}

}  // namespace

Statistic symmetric_expansion_statistic(std::span<const double> y, double p,
                                        double amplitude, double sigma) {
  if (y.empty()) {
    throw std::invalid_argument("symmetric_expansion_statistic: empty input");
  }
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("symmetric_expansion_statistic: p in (0, 1)");
  }
  const double snr_factor = amplitude / (sigma * sigma);
  const auto acc = accumulate_forms(y, 2.0 * p - 1.0);
  const double value = 2.0 * p * snr_factor * snr_factor *
                       (acc.cross + (1.0 - 1.0 / (4.0 * p)) * acc.squares);
  return Statistic{value, "symmetric-expansion"};
}

Statistic filtered_energy_closed_form(std::span<const double> y, double alpha) {
  if (y.empty()) {
    throw std::invalid_argument("filtered_energy_closed_form: empty input");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument(
        "filtered_energy_closed_form: alpha must lie in (0, 1)");
  }
  const double d = (1.0 - alpha * alpha) / (2.0 * alpha);
  const auto acc = accumulate_forms(y, alpha);
  const double value = d * (acc.cross + alpha / (1.0 + alpha) * acc.squares);
  return Statistic{value, "filtered-energy-closed-form"};
}

Statistic hybrid_statistic(std::span<const double> y,
                           const HybridConstants& constants, double alpha) {
  if (y.empty()) {
    throw std::invalid_argument("hybrid_statistic: empty input");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("hybrid_statistic: alpha must lie in (0, 1)");
  }
  const double d = (1.0 - alpha * alpha) / (2.0 * alpha);
  if (std::abs(d - constants.gain_d) >
      1e-9 * std::max(1.0, std::abs(constants.gain_d))) {
    throw std::invalid_argument(
        "hybrid_statistic: constants were built with a different alpha");
  }
  const auto acc = accumulate_forms(y, alpha);
  const double t2 = d * (acc.cross + alpha / (1.0 + alpha) * acc.squares);
  const double value =
      t2 + d * (constants.c_i * acc.linear + constants.c_ii * acc.squares);
  return Statistic{value, "hybrid"};
}

double cross_term_gain(double alpha, double p) {
  const double product = alpha * (2.0 * p - 1.0);
  if (product >= 1.0) {
    throw std::invalid_argument("cross_term_gain: alpha (2p - 1) must be < 1");
  }
  return product / (1.0 - product);
}

double geometric_cross_term_sum(std::span<const double> y, double alpha) {
  return accumulate_forms(y, alpha).cross;
}

}  // namespace spindet
