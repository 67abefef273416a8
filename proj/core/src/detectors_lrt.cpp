#include "spindet/detectors_lrt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace spindet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

}  // namespace

TelegraphPosterior rt_posterior_step(const TelegraphPosterior& prev,
                                     double y_prev, double amplitude,
                                     double sigma, double p, double q) {
  const double s = amplitude * y_prev / (sigma * sigma);
  // star = e^s R(+A) / (e^s R(+A) + e^-s R(-A)), shifted by the larger
  // exponent so only e^{-2|s|} is ever formed.
  double star;
  if (s >= 0.0) {
    const double e = std::exp(-2.0 * s);
    star = prev.r_plus / (prev.r_plus + prev.r_minus * e);
  } else {
    const double e = std::exp(2.0 * s);
    star = prev.r_plus * e / (prev.r_plus * e + prev.r_minus);
  }
  const double r_plus = p * star + (1.0 - q) * (1.0 - star);
  return TelegraphPosterior{r_plus, 1.0 - r_plus};
}

Statistic rt_log_lrt(std::span<const double> y, double amplitude, double sigma,
                     double p, double q) {
  if (y.empty()) throw std::invalid_argument("rt_log_lrt: empty input");
  const double c = amplitude / (sigma * sigma);

  double r_plus = 0.5;
  double llr = 0.0;
  for (double yk : y) {
    const double s = c * yk;
    const double r_minus = 1.0 - r_plus;
    // Shared shifted exponential serves both the k-th log term and the
    // posterior update with the same sample.
    double star;
    if (s >= 0.0) {
      const double e = std::exp(-2.0 * s);
      llr += s + std::log(r_plus + r_minus * e);
      star = r_plus / (r_plus + r_minus * e);
    } else {
      const double e = std::exp(2.0 * s);
      llr += -s + std::log(r_minus + r_plus * e);
      star = r_plus * e / (r_plus * e + r_minus);
    }
    r_plus = p * star + (1.0 - q) * (1.0 - star);
  }
  return Statistic{llr, "rt-lrt"};
}

Statistic rt_brute_force_log_lrt(std::span<const double> y, double amplitude,
                                 double sigma, double p, double q) {
  const std::size_t n = y.size();
  if (n == 0) throw std::invalid_argument("rt_brute_force_log_lrt: empty input");
  if (n > 20) {
    throw std::invalid_argument("rt_brute_force_log_lrt: N must be <= 20");
  }
  const double c = amplitude / (sigma * sigma);
  const double log_half = std::log(0.5);
  const double lp_stay_plus = std::log(p);
  const double lp_flip_plus = std::log(1.0 - p);
  const double lp_stay_minus = std::log(q);
  const double lp_flip_minus = std::log(1.0 - q);

  double total = kNegInf;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    // bit i set <=> zeta_i = +A. Per-sample Gaussian ratio reduces to
    // e^{zeta_i y_i / sigma^2} because zeta_i^2 is the same on every path.
    bool plus = (mask & 1) != 0;
    double lp = log_half + (plus ? c * y[0] : -c * y[0]);
    for (std::size_t i = 1; i < n; ++i) {
      const bool next = ((mask >> i) & 1) != 0;
      if (plus) {
        lp += next ? lp_stay_plus : lp_flip_plus;
      } else {
        lp += next ? lp_flip_minus : lp_stay_minus;
      }
      lp += next ? c * y[i] : -c * y[i];
      plus = next;
    }
    total = log_add_exp(total, lp);
  }
  return Statistic{total, "rt-lrt-brute-force"};
}

WalkPosterior initial_walk_posterior(const WalkModel& model) {
  // zeta_0 is equally likely to be +/- s: mass 1/2 on each neighbour of the
  // center index M.
  WalkPosterior r;
  r.probs.assign(static_cast<std::size_t>(model.state_count()), 0.0);
  const int m = model.half_states();
  r.probs[static_cast<std::size_t>(m - 1)] = 0.5;
  r.probs[static_cast<std::size_t>(m + 1)] = 0.5;
  return r;
}

namespace {

// Shifted Gaussian log-weights for one sample: logw[j] = -(y - d_j)^2/(2s^2).
void walk_log_weights(const WalkModel& model, double y, double sigma,
                      std::vector<double>& logw) {
  const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
  const int n = model.state_count();
  logw.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double diff = y - model.state_value(j);
    logw[static_cast<std::size_t>(j)] = -diff * diff * inv_two_var;
  }
}

}  // namespace

WalkPosterior rw_posterior_step(const WalkPosterior& prev, double y_prev,
                                const WalkModel& model, double sigma) {
  const int n = model.state_count();
  if (prev.probs.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("rw_posterior_step: posterior size mismatch");
  }
  std::vector<double> logw;
  walk_log_weights(model, y_prev, sigma, logw);

  // Shift by the max over the support of prev so the leading term is e^0.
  double shift = kNegInf;
  for (int j = 0; j < n; ++j) {
    if (prev.probs[static_cast<std::size_t>(j)] > 0.0) {
      shift = std::max(shift, logw[static_cast<std::size_t>(j)]);
    }
  }
  if (shift == kNegInf) {
    throw std::invalid_argument("rw_posterior_step: empty posterior support");
  }

  std::vector<double> weighted(static_cast<std::size_t>(n), 0.0);
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    const double mass = prev.probs[static_cast<std::size_t>(j)];
    if (mass > 0.0) {
      const double w =
          mass * std::exp(logw[static_cast<std::size_t>(j)] - shift);
      weighted[static_cast<std::size_t>(j)] = w;
      total += w;
    }
  }
  if (!(total > 0.0)) {
    throw std::runtime_error("rw_posterior_step: weight sum underflowed");
  }

  WalkPosterior next;
  next.probs.assign(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    const double v = weighted[static_cast<std::size_t>(j)] / total;
    if (v == 0.0) continue;
    if (j > 0) next.probs[static_cast<std::size_t>(j - 1)] += model.down_probability(j) * v;
    if (j < n - 1) next.probs[static_cast<std::size_t>(j + 1)] += model.up_probability(j) * v;
  }
  return next;
}

Statistic rw_log_lrt(std::span<const double> y, const WalkModel& model,
                     double sigma) {
  if (y.empty()) throw std::invalid_argument("rw_log_lrt: empty input");
  const int n = model.state_count();
  const int m = model.half_states();

  std::vector<double> r(static_cast<std::size_t>(n), 0.0);
  r[static_cast<std::size_t>(m - 1)] = 0.5;
  r[static_cast<std::size_t>(m + 1)] = 0.5;

  std::vector<double> logw;
  std::vector<double> scratch(static_cast<std::size_t>(n));
  double llr = 0.0;
  for (double yk : y) {
    walk_log_weights(model, yk, sigma, logw);

    double shift = kNegInf;
    for (int j = 0; j < n; ++j) {
      if (r[static_cast<std::size_t>(j)] > 0.0) {
        shift = std::max(shift, logw[static_cast<std::size_t>(j)]);
      }
    }

    double total = 0.0;
    for (int j = 0; j < n; ++j) {
      const double mass = r[static_cast<std::size_t>(j)];
      double w = 0.0;
      if (mass > 0.0) {
        w = mass * std::exp(logw[static_cast<std::size_t>(j)] - shift);
        total += w;
      }
      scratch[static_cast<std::size_t>(j)] = w;
    }
    // ln(R_k . W_k) - ln W_k(center); the Gaussian normalizer cancels.
    const double log_center = logw[static_cast<std::size_t>(m)];
    llr += shift + std::log(total) - log_center;

    // Reuse the shifted weights for the posterior advance.
    std::fill(r.begin(), r.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      const double v = scratch[static_cast<std::size_t>(j)] / total;
      if (v == 0.0) continue;
      if (j > 0) r[static_cast<std::size_t>(j - 1)] += model.down_probability(j) * v;
      if (j < n - 1) r[static_cast<std::size_t>(j + 1)] += model.up_probability(j) * v;
    }
  }
  return Statistic{llr, "rw-lrt"};
}

namespace {

struct WalkEnumerator {
  std::span<const double> y;
  const WalkModel& model;
  double inv_two_var;
  double total = kNegInf;

  void visit(std::size_t k, int state, double lp) {
    const double d = y[k] - model.state_value(state);
    lp += -d * d * inv_two_var + y[k] * y[k] * inv_two_var;
    if (k + 1 == y.size()) {
      total = log_add_exp(total, lp);
      return;
    }
    const double down = model.down_probability(state);
    const double up = model.up_probability(state);
    if (down > 0.0) visit(k + 1, state - 1, lp + std::log(down));
    if (up > 0.0) visit(k + 1, state + 1, lp + std::log(up));
  }
};

}  // namespace

Statistic rw_brute_force_log_lrt(std::span<const double> y,
                                 const WalkModel& model, double sigma) {
  if (y.empty()) throw std::invalid_argument("rw_brute_force_log_lrt: empty input");
  if (y.size() > 12 || model.half_states() > 3) {
    throw std::invalid_argument(
        "rw_brute_force_log_lrt: N must be <= 12 and M <= 3");
  }
  WalkEnumerator e{y, model, 1.0 / (2.0 * sigma * sigma)};
  const int m = model.half_states();
  const double log_half = std::log(0.5);
  e.visit(0, m - 1, log_half);
  e.visit(0, m + 1, log_half);
  return Statistic{e.total, "rw-lrt-brute-force"};
}

}  // namespace spindet
