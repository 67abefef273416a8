#include "spindet/signal_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "spindet/rng.hpp"

namespace spindet {

std::string to_string(Hypothesis h) {
  return h == Hypothesis::kH0 ? "H0" : "H1";
}

Hypothesis hypothesis_from_string(const std::string& s) {
  if (s == "H0") return Hypothesis::kH0;
  if (s == "H1") return Hypothesis::kH1;
  throw std::invalid_argument("unknown hypothesis label: " + s);
}

TelegraphModel::TelegraphModel(double amplitude, double p, double q,
                               std::size_t n_samples, double sample_period_s)
    : amplitude_(amplitude),
      p_(p),
      q_(q),
      n_samples_(n_samples),
      sample_period_(sample_period_s) {
  if (!(amplitude > 0.0)) {
    throw std::invalid_argument("TelegraphModel: amplitude must be > 0");
  }
  if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("TelegraphModel: p and q must lie in (0, 1)");
  }
  if (n_samples < 1) {
    throw std::invalid_argument("TelegraphModel: n_samples must be >= 1");
  }
  if (!(sample_period_s > 0.0)) {
    throw std::invalid_argument("TelegraphModel: sample period must be > 0");
  }
}

WalkModel::WalkModel(int half_states, double step, double k1, double k2,
                     double h1, double h2, std::size_t n_samples)
    : half_states_(half_states),
      step_(step),
      k1_(k1),
      k2_(k2),
      h1_(h1),
      h2_(h2),
      n_samples_(n_samples) {
  if (half_states < 1) {
    throw std::invalid_argument("WalkModel: M must be >= 1");
  }
  if (!(step > 0.0)) {
    throw std::invalid_argument("WalkModel: step must be > 0");
  }
  for (double v : {k1, k2, h1, h2}) {
    if (!(v > 0.0 && v < 1.0)) {
      throw std::invalid_argument(
          "WalkModel: quartile probabilities must lie in (0, 1)");
    }
  }
  if (std::abs(k1 + k2 - 1.0) > 1e-12 || std::abs(h1 + h2 - 1.0) > 1e-12) {
    throw std::invalid_argument("WalkModel: require K1+K2 = 1 and H1+H2 = 1");
  }
  if (n_samples < 1) {
    throw std::invalid_argument("WalkModel: n_samples must be >= 1");
  }

  const int m = half_states_;
  const int n = state_count();
  down_.assign(static_cast<std::size_t>(n), 0.0);
  up_.assign(static_cast<std::size_t>(n), 0.0);
  up_[0] = 1.0;                                  // reflecting lower end
  down_[static_cast<std::size_t>(n - 1)] = 1.0;  // reflecting upper end
  // Quartile boundaries (ceil(M/2) keeps odd M consistent with even M).
  const int lo = (m + 1) / 2;
  const int hi = 2 * m - lo;
  for (int i = 1; i <= 2 * m - 1; ++i) {
    double d, u;
    if (i < lo) {
      d = k1_;
      u = k2_;
    } else if (i <= hi) {
      d = 0.5;
      u = 0.5;
    } else {
      d = h1_;
      u = h2_;
    }
    down_[static_cast<std::size_t>(i)] = d;
    up_[static_cast<std::size_t>(i)] = u;
  }
}

std::vector<std::vector<double>> WalkModel::dense_transition_matrix() const {
  const int n = state_count();
  std::vector<std::vector<double>> p(
      static_cast<std::size_t>(n),
      std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i) {
    if (i > 0) p[i][i - 1] = down_probability(i);
    if (i < n - 1) p[i][i + 1] = up_probability(i);
  }
  return p;
}

SignalPath gen_telegraph(const TelegraphModel& model, std::uint64_t seed) {
  auto engine = rng::make_engine(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  SignalPath path;
  path.model_tag = ModelTag::kTelegraph;
  path.values.resize(model.n_samples());

  const double a = model.amplitude();
  double z = uniform(engine) < 0.5 ? a : -a;
  path.values[0] = z;
  for (std::size_t i = 1; i < model.n_samples(); ++i) {
    const double stay = z > 0.0 ? model.p() : model.q();
    if (uniform(engine) >= stay) z = -z;
    path.values[i] = z;
  }
  return path;
}

SignalPath gen_random_walk(const WalkModel& model, std::uint64_t seed) {
  auto engine = rng::make_engine(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  SignalPath path;
  path.model_tag = ModelTag::kWalk;
  path.values.resize(model.n_samples());

  const int m = model.half_states();
  int state = uniform(engine) < 0.5 ? m - 1 : m + 1;  // zeta_0 = +/- s
  path.values[0] = model.state_value(state);
  for (std::size_t i = 1; i < model.n_samples(); ++i) {
    state = uniform(engine) < model.down_probability(state) ? state - 1
                                                            : state + 1;
    path.values[i] = model.state_value(state);
  }
  return path;
}

ObservationRecord add_awgn(const SignalPath* path, std::size_t n, double sigma,
                           std::uint64_t seed, Hypothesis hypothesis) {
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("add_awgn: sigma must be > 0");
  }
  if (hypothesis == Hypothesis::kH1) {
    if (path == nullptr || path->values.size() != n) {
      throw std::invalid_argument(
          "add_awgn: H1 requires a clean path of length n");
    }
  } else if (path != nullptr) {
    throw std::invalid_argument("add_awgn: H0 must not carry a clean path");
  }

  auto engine = rng::make_engine(seed);
  std::normal_distribution<double> noise(0.0, sigma);

  ObservationRecord record;
  record.sigma = sigma;
  record.hypothesis = hypothesis;
  record.seed = seed;
  record.samples.resize(n);
  if (hypothesis == Hypothesis::kH1) {
    for (std::size_t i = 0; i < n; ++i) {
      record.samples[i] = path->values[i] + noise(engine);
    }
    record.clean_path = *path;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      record.samples[i] = noise(engine);
    }
  }
  return record;
}

double snr_db(const TelegraphModel& model, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("snr_db: sigma must be > 0");
  return 20.0 * std::log10(model.amplitude() / sigma);
}

double snr_db(const WalkModel& model, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("snr_db: sigma must be > 0");
  return 10.0 * std::log10(stationary_mean_square(model) / (sigma * sigma));
}

double sigma_for_snr_db(const TelegraphModel& model, double snr_db_value) {
  return model.amplitude() * std::pow(10.0, -snr_db_value / 20.0);
}

double sigma_for_snr_db(const WalkModel& model, double snr_db_value) {
  return std::sqrt(stationary_mean_square(model) *
                   std::pow(10.0, -snr_db_value / 10.0));
}

double stationary_mean_square(const WalkModel& model) {
  const auto pi = stationary_distribution(model);
  double m2 = 0.0;
  for (int j = 0; j < model.state_count(); ++j) {
    const double v = model.state_value(j);
    m2 += pi[static_cast<std::size_t>(j)] * v * v;
  }
  return m2;
}

std::vector<double> stationary_distribution(const WalkModel& model) {
  // The chain is periodic (every step flips state parity), so plain power
  // iteration oscillates. Iterating the lazy kernel (I + P)/2 has the same
  // fixed point and converges.
  const int n = model.state_count();
  std::vector<double> v(static_cast<std::size_t>(n), 1.0 / n);
  std::vector<double> vp(static_cast<std::size_t>(n));
  const int max_iters = 4'000'000;
  for (int iter = 0; iter < max_iters; ++iter) {
    // vp = v P using the tridiagonal structure.
    std::fill(vp.begin(), vp.end(), 0.0);
    for (int j = 0; j < n; ++j) {
      const double mass = v[static_cast<std::size_t>(j)];
      if (j > 0) vp[j - 1] += mass * model.down_probability(j);
      if (j < n - 1) vp[j + 1] += mass * model.up_probability(j);
    }
    double err = 0.0;
    for (int j = 0; j < n; ++j) {
      err = std::max(err, std::abs(vp[static_cast<std::size_t>(j)] -
                                   v[static_cast<std::size_t>(j)]));
      v[static_cast<std::size_t>(j)] =
          0.5 * (v[static_cast<std::size_t>(j)] + vp[static_cast<std::size_t>(j)]);
    }
    if (err < 1e-14) {
      const double total = std::accumulate(v.begin(), v.end(), 0.0);
      for (auto& x : v) x /= total;
      return v;
    }
  }
  throw std::runtime_error(
      "stationary_distribution: power iteration did not converge");
}

double telegraph_p_from_rate(double lambda, double sample_period_s) {
  if (lambda < 0.0 || !(sample_period_s > 0.0)) {
    throw std::invalid_argument(
        "telegraph_p_from_rate: need lambda >= 0 and Ts > 0");
  }
  const double product = sample_period_s * lambda;
  if (product >= 1.0) {
    throw std::invalid_argument(
        "telegraph_p_from_rate: Ts * lambda must be < 1");
  }
  return 1.0 - product;
}

double alpha_from_bandwidth(double omega_c) {
  constexpr double kHalfPi = 1.5707963267948966;
  if (!(omega_c > 0.0 && omega_c < kHalfPi)) {
    throw std::invalid_argument(
        "alpha_from_bandwidth: omega_c must lie in (0, pi/2)");
  }
  return (1.0 - std::sin(omega_c)) / std::cos(omega_c);
}

double physical_amplitude(double spring_k, double omega0, double b1,
                          double gradient_g, double mu) {
  if (!(spring_k > 0.0) || !(omega0 > 0.0) || !(b1 > 0.0) ||
      !(gradient_g > 0.0) || !(mu >= 0.0)) {
    throw std::invalid_argument("physical_amplitude: inputs must be positive");
  }
  return 0.5 * omega0 * std::abs(mu * gradient_g * gradient_g / (spring_k * b1));
}

std::vector<double> mean_normalized_autocorrelation(
    const std::vector<SignalPath>& paths, int max_lag) {
  if (paths.empty()) {
    throw std::invalid_argument("autocorrelation: no paths supplied");
  }
  const std::size_t n = paths.front().values.size();
  if (max_lag < 1 || static_cast<std::size_t>(max_lag) >= n) {
    throw std::invalid_argument("autocorrelation: max_lag out of range");
  }

  double total = 0.0;
  std::size_t count = 0;
  for (const auto& path : paths) {
    if (path.values.size() != n) {
      throw std::invalid_argument("autocorrelation: unequal path lengths");
    }
    total += std::accumulate(path.values.begin(), path.values.end(), 0.0);
    count += n;
  }
  const double mean = total / static_cast<double>(count);

  std::vector<double> cov(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (const auto& path : paths) {
    for (int k = 0; k <= max_lag; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i + static_cast<std::size_t>(k) < n; ++i) {
        acc += (path.values[i] - mean) *
               (path.values[i + static_cast<std::size_t>(k)] - mean);
      }
      cov[static_cast<std::size_t>(k)] += acc;
    }
  }
  if (!(cov[0] > 0.0)) {
    throw std::runtime_error("autocorrelation: zero variance paths");
  }
  std::vector<double> rho(static_cast<std::size_t>(max_lag));
  for (int k = 1; k <= max_lag; ++k) {
    // Unnormalized-by-count ratio: the per-lag sample counts cancel to
    // first order and lag 0 dominates the scale.
    rho[static_cast<std::size_t>(k - 1)] =
        cov[static_cast<std::size_t>(k)] / cov[0];
  }
  return rho;
}

namespace {

double fit_objective(const std::vector<double>& rho, double x) {
  double err = 0.0;
  double xk = 1.0;
  for (double r : rho) {
    xk *= x;
    const double d = r - xk;
    err += d * d;
  }
  return err;
}

}  // namespace

double fit_symmetric_p(const std::vector<double>& rho) {
  if (rho.empty()) {
    throw std::invalid_argument("fit_symmetric_p: empty autocorrelation");
  }
  constexpr double kBound = 1.0 - 1e-9;
  // Coarse scan dodges the local minima of sum_k (rho_k - x^k)^2 for
  // oscillating x, then golden-section refines.
  const int scan = 4000;
  double best_x = 0.0;
  double best_err = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= scan; ++i) {
    const double x = -kBound + 2.0 * kBound * i / scan;
    const double err = fit_objective(rho, x);
    if (err < best_err) {
      best_err = err;
      best_x = x;
    }
  }
  double lo = std::max(-kBound, best_x - 2.0 * kBound / scan);
  double hi = std::min(kBound, best_x + 2.0 * kBound / scan);
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = fit_objective(rho, c);
  double fd = fit_objective(rho, d);
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = fit_objective(rho, c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = fit_objective(rho, d);
    }
  }
  const double x = 0.5 * (lo + hi);
  return 0.5 * (1.0 + x);
}

TelegraphFit fit_telegraph_alpha_to_walk(const WalkModel& model, int n_paths,
                                         std::uint64_t seed) {
  if (std::abs(model.k1() - model.h2()) > 1e-12 ||
      std::abs(model.k2() - model.h1()) > 1e-12) {
    throw std::invalid_argument(
        "fit_telegraph_alpha_to_walk: calibration is defined only for "
        "symmetric walks (K1 = H2, K2 = H1)");
  }
  if (n_paths < 1) {
    throw std::invalid_argument("fit_telegraph_alpha_to_walk: n_paths >= 1");
  }
  const std::size_t n = model.n_samples();
  const int max_lag = static_cast<int>(std::min<std::size_t>(50, n / 10));
  if (max_lag < 1) {
    throw std::invalid_argument(
        "fit_telegraph_alpha_to_walk: paths too short to estimate lags");
  }

  std::vector<SignalPath> paths;
  paths.reserve(static_cast<std::size_t>(n_paths));
  for (int i = 0; i < n_paths; ++i) {
    paths.push_back(gen_random_walk(
        model, rng::substream_seed(seed, static_cast<std::uint64_t>(i))));
  }
  const auto rho = mean_normalized_autocorrelation(paths, max_lag);
  const double p_hat = fit_symmetric_p(rho);
  return TelegraphFit{p_hat, 2.0 * p_hat - 1.0};
}

}  // namespace spindet
