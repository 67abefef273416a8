#pragma once

#include <span>

#include "spindet/detectors_classical.hpp"

namespace spindet {

/// Constants of the second-order expansion of the telegraph log-LRT and of
/// the hybrid filtered-energy/amplitude/energy statistic assembled from it.
struct HybridConstants {
  double r;        // p + q - 1
  double c_m;      // (p - q) / (2 - p - q)
  double c_i;      // (p - q) sigma^2 / (4 q (1 - r) A)
  double c_ii;     // r (1 - q) / (2 q (1 - r))
  double scale_c;  // 4 q (1 - q) (A / sigma^2)^2 / (1 - r)
  double gain_d;   // (1 - alpha^2) / (2 alpha)
};

HybridConstants hybrid_constants(double p, double q, double amplitude,
                                 double sigma, double alpha);

/// Symmetric-case (p = q) second-order expansion of the telegraph log-LRT:
///   2p (A/sigma^2)^2 [ sum_{j<k} (2p-1)^{k-j} y_j y_k
///                      + (1 - 1/(4p)) sum_k y_k^2 ].
/// Evaluated in O(N) with a running geometric cross-term sum.
Statistic symmetric_expansion_statistic(std::span<const double> y, double p,
                                        double amplitude, double sigma);

/// Large-N quadratic form of the filtered energy statistic:
///   D [ sum_{j<k} alpha^{k-j} y_j y_k + alpha/(1+alpha) sum_k y_k^2 ],
/// D = (1 - alpha^2) / (2 alpha). Differs from the exact filtered energy by
/// O(1) startup edge terms. O(N).
Statistic filtered_energy_closed_form(std::span<const double> y, double alpha);

/// Hybrid statistic: filtered-energy quadratic form plus the amplitude and
/// energy corrections, T2(y) + D [ C_I sum y_k + C_II sum y_k^2 ]. The
/// constants must have been built with the same alpha.
Statistic hybrid_statistic(std::span<const double> y,
                           const HybridConstants& constants, double alpha);

/// Expected H1-vs-H0 gain of the geometric cross-term sum per sample pair:
///   G = alpha (2p - 1) / (1 - alpha (2p - 1)).
double cross_term_gain(double alpha, double p);

/// The geometric cross-term sum sum_{j<k} alpha^{k-j} y_j y_k on its own
/// (the quantity whose H1-H0 mean difference is approximately G A^2 (N-1)).
double geometric_cross_term_sum(std::span<const double> y, double alpha);

}  // namespace spindet
