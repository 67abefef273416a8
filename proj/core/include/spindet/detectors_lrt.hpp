#pragma once

#include <span>
#include <vector>

#include "spindet/detectors_classical.hpp"
#include "spindet/signal_models.hpp"

namespace spindet {

/// Predictive probabilities R_k(+A), R_k(-A) of the telegraph state given
/// observations up to k-1.
struct TelegraphPosterior {
  double r_plus = 0.5;
  double r_minus = 0.5;
};

/// One forward-filter update: absorbs y_prev (= y_{k-1}) into the posterior
/// and advances one transition, giving R_k from R_{k-1}. Exponent-shifted so
/// arbitrarily large |y_prev| cannot overflow.
TelegraphPosterior rt_posterior_step(const TelegraphPosterior& prev,
                                     double y_prev, double amplitude,
                                     double sigma, double p, double q);

/// Log likelihood-ratio statistic for the telegraph signal in WGN,
///   sum_k ln[ R_k(A) e^{A y_k / sigma^2} + R_k(-A) e^{-A y_k / sigma^2} ],
/// with R_0(+/-A) = 1/2. O(N); all accumulation stays in the log domain.
Statistic rt_log_lrt(std::span<const double> y, double amplitude, double sigma,
                     double p, double q);

/// Exact marginalization of the same statistic over all 2^N telegraph paths.
/// Test oracle; refuses N > 20.
Statistic rt_brute_force_log_lrt(std::span<const double> y, double amplitude,
                                 double sigma, double p, double q);

/// Predictive state distribution of the walk; probs[i] is the probability of
/// state (i - M) * s. Support alternates parity with the step index.
struct WalkPosterior {
  std::vector<double> probs;
};

WalkPosterior initial_walk_posterior(const WalkModel& model);

/// R_k = Q (W_{k-1} * R_{k-1}) / (W_{k-1} . R_{k-1}), with the Gaussian
/// weight vector exponent-shifted by its maximum and Q = P^T applied as a
/// three-term stencil: O(M) per step.
WalkPosterior rw_posterior_step(const WalkPosterior& prev, double y_prev,
                                const WalkModel& model, double sigma);

/// Log LRT for the walk model: sum_k ln[(R_k . W_k) / W_k(center)]. The
/// common Gaussian normalizer cancels between numerator and denominator.
/// O(MN) total.
Statistic rw_log_lrt(std::span<const double> y, const WalkModel& model,
                     double sigma);

/// Path-enumeration oracle for rw_log_lrt. Refuses N > 12 or M > 3.
Statistic rw_brute_force_log_lrt(std::span<const double> y,
                                 const WalkModel& model, double sigma);

}  // namespace spindet
