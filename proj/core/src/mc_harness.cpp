#include "spindet/mc_harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "spindet/detectors_approx.hpp"
#include "spindet/detectors_classical.hpp"
#include "spindet/detectors_lrt.hpp"
#include "spindet/rng.hpp"

namespace spindet {

namespace {

// Substream roles within one master seed.
constexpr std::uint64_t kStreamPath = 1;
constexpr std::uint64_t kStreamNoiseH1 = 2;
constexpr std::uint64_t kStreamNoiseH0 = 3;
constexpr std::uint64_t kStreamSnrPoint = 4;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::size_t model_n_samples(const ModelConfig& model) {
  return std::visit([](const auto& m) { return m.n_samples(); }, model);
}

SignalPath generate_path(const ModelConfig& model, std::uint64_t seed) {
  if (const auto* telegraph = std::get_if<TelegraphModel>(&model)) {
    return gen_telegraph(*telegraph, seed);
  }
  return gen_random_walk(std::get<WalkModel>(model), seed);
}

double model_snr_db(const ModelConfig& model, double sigma) {
  return std::visit([&](const auto& m) { return snr_db(m, sigma); }, model);
}

double model_sigma_for_snr_db(const ModelConfig& model, double snr_db_value) {
  return std::visit(
      [&](const auto& m) { return sigma_for_snr_db(m, snr_db_value); }, model);
}

std::string model_tag_name(const ModelConfig& model) {
  return std::holds_alternative<TelegraphModel>(model) ? "telegraph" : "walk";
}

const std::vector<std::string>& registered_detector_names() {
  static const std::vector<std::string> names = {
      "amplitude", "energy", "filtered-energy", "hybrid",
      "rt-lrt",    "rw-lrt", "mf"};
  return names;
}

EquivalentTelegraph equivalent_telegraph(const ModelConfig& model,
                                         int n_fit_paths,
                                         std::uint64_t fit_seed) {
  if (const auto* telegraph = std::get_if<TelegraphModel>(&model)) {
    return EquivalentTelegraph{telegraph->amplitude(), telegraph->p(),
                               telegraph->q()};
  }
  const auto& walk = std::get<WalkModel>(model);
  const auto fit = fit_telegraph_alpha_to_walk(walk, n_fit_paths, fit_seed);
  // Amplitude matched so the equivalent telegraph's autocovariance has the
  // walk's stationary lag-0 value.
  return EquivalentTelegraph{std::sqrt(stationary_mean_square(walk)),
                             fit.p_hat, fit.p_hat};
}

std::vector<Detector> make_detector_bank(const ModelConfig& model,
                                         double sigma,
                                         const std::vector<DetectorSpec>& specs,
                                         const DetectorBankOptions& options) {
  if (specs.empty()) {
    throw std::invalid_argument("make_detector_bank: no detectors requested");
  }
  const auto& registered = registered_detector_names();
  for (const auto& spec : specs) {
    if (std::find(registered.begin(), registered.end(), spec.name) ==
        registered.end()) {
      std::string names;
      for (const auto& n : registered) names += n + " ";
      throw std::invalid_argument("unknown detector '" + spec.name +
                                  "'; registered: " + names);
    }
  }

  // The equivalent-telegraph calibration (one autocorrelation fit on a walk
  // model) is shared by every detector that needs it.
  std::optional<EquivalentTelegraph> equivalent = options.equivalent;
  auto get_equivalent = [&]() -> const EquivalentTelegraph& {
    if (!equivalent) {
      equivalent =
          equivalent_telegraph(model, options.fit_paths, options.fit_seed);
    }
    return *equivalent;
  };
  auto resolve_alpha = [&](const DetectorSpec& spec) {
    if (spec.alpha) return *spec.alpha;
    const auto& eq = get_equivalent();
    return eq.p + eq.q - 1.0;
  };

  std::vector<Detector> bank;
  bank.reserve(specs.size());
  for (const auto& spec : specs) {
    Detector d;
    d.name = spec.name;
    if (spec.name == "amplitude") {
      d.evaluate = [](std::span<const double> y, const SignalPath&) {
        return amplitude_statistic(y).value;
      };
    } else if (spec.name == "energy") {
      d.evaluate = [](std::span<const double> y, const SignalPath&) {
        return energy_statistic(y).value;
      };
    } else if (spec.name == "filtered-energy") {
      const LowPassFilter filter{resolve_alpha(spec)};
      d.evaluate = [filter](std::span<const double> y, const SignalPath&) {
        return energy_statistic(y, &filter).value;
      };
    } else if (spec.name == "hybrid") {
      const double alpha = resolve_alpha(spec);
      const auto& eq = get_equivalent();
      const HybridConstants constants =
          hybrid_constants(eq.p, eq.q, eq.amplitude, sigma, alpha);
      d.evaluate = [constants, alpha](std::span<const double> y,
                                      const SignalPath&) {
        return hybrid_statistic(y, constants, alpha).value;
      };
    } else if (spec.name == "rt-lrt") {
      const auto& eq = get_equivalent();
      const double a = eq.amplitude;
      const double p = eq.p;
      const double q = eq.q;
      d.evaluate = [a, p, q, sigma](std::span<const double> y,
                                    const SignalPath&) {
        return rt_log_lrt(y, a, sigma, p, q).value;
      };
    } else if (spec.name == "rw-lrt") {
      const auto* walk = std::get_if<WalkModel>(&model);
      if (walk == nullptr) {
        throw std::invalid_argument(
            "rw-lrt requires a random-walk model configuration");
      }
      const WalkModel walk_copy = *walk;
      d.evaluate = [walk_copy, sigma](std::span<const double> y,
                                      const SignalPath&) {
        return rw_log_lrt(y, walk_copy, sigma).value;
      };
    } else {  // mf
      d.evaluate = [](std::span<const double> y, const SignalPath& clean) {
        return matched_filter_statistic(y, clean).value;
      };
    }
    bank.push_back(std::move(d));
  }
  return bank;
}

std::string experiment_fingerprint(const ModelConfig& model, double sigma,
                                   int n_trials, std::uint64_t master_seed) {
  std::string fp = "model=" + model_tag_name(model);
  if (const auto* telegraph = std::get_if<TelegraphModel>(&model)) {
    fp += ";A=" + format_double(telegraph->amplitude());
    fp += ";p=" + format_double(telegraph->p());
    fp += ";q=" + format_double(telegraph->q());
    fp += ";Ts=" + format_double(telegraph->sample_period());
  } else {
    const auto& walk = std::get<WalkModel>(model);
    fp += ";M=" + std::to_string(walk.half_states());
    fp += ";s=" + format_double(walk.step());
    fp += ";K1=" + format_double(walk.k1());
    fp += ";K2=" + format_double(walk.k2());
    fp += ";H1=" + format_double(walk.h1());
    fp += ";H2=" + format_double(walk.h2());
  }
  fp += ";N=" + std::to_string(model_n_samples(model));
  fp += ";sigma=" + format_double(sigma);
  fp += ";trials=" + std::to_string(n_trials);
  fp += ";seed=" + std::to_string(master_seed);
  return fp;
}

std::vector<TrialBatch> run_trials(const ModelConfig& model,
                                   const std::vector<Detector>& detectors,
                                   int n_trials, double sigma,
                                   std::uint64_t master_seed) {
  if (n_trials < 2) {
    throw std::invalid_argument("run_trials: n_trials must be >= 2");
  }
  if (detectors.empty()) {
    throw std::invalid_argument("run_trials: no detectors");
  }
  const std::size_t n = model_n_samples(model);
  const std::string fingerprint =
      experiment_fingerprint(model, sigma, n_trials, master_seed);

  std::vector<TrialBatch> batches(detectors.size());
  for (std::size_t d = 0; d < detectors.size(); ++d) {
    batches[d].detector_name = detectors[d].name;
    batches[d].h0_stats.resize(static_cast<std::size_t>(n_trials));
    batches[d].h1_stats.resize(static_cast<std::size_t>(n_trials));
    batches[d].fingerprint = fingerprint;
  }

#pragma omp parallel for schedule(dynamic)
  for (int t = 0; t < n_trials; ++t) {
    const auto ut = static_cast<std::uint64_t>(t);
    const SignalPath path =
        generate_path(model, rng::substream_seed(master_seed, ut, kStreamPath));
    const ObservationRecord h1 =
        add_awgn(&path, n, sigma,
                 rng::substream_seed(master_seed, ut, kStreamNoiseH1),
                 Hypothesis::kH1);
    const ObservationRecord h0 =
        add_awgn(nullptr, n, sigma,
                 rng::substream_seed(master_seed, ut, kStreamNoiseH0),
                 Hypothesis::kH0);
    for (std::size_t d = 0; d < detectors.size(); ++d) {
      batches[d].h1_stats[static_cast<std::size_t>(t)] =
          detectors[d].evaluate(h1.samples, path);
      batches[d].h0_stats[static_cast<std::size_t>(t)] =
          detectors[d].evaluate(h0.samples, path);
    }
  }
  return batches;
}

double empirical_threshold(std::span<const double> h0_stats, double pf) {
  if (!(pf > 0.0 && pf < 1.0)) {
    throw std::invalid_argument("empirical_threshold: pf must lie in (0, 1)");
  }
  const auto n = static_cast<double>(h0_stats.size());
  if (h0_stats.empty() || n * pf < 1.0 - 1e-9) {
    throw std::invalid_argument(
        "empirical_threshold: need at least 1/pf H0 statistics");
  }
  // k-th smallest with k = n - floor(n pf) = ceil(n (1 - pf)); then at most
  // floor(n pf) values lie strictly above the threshold.
  const auto k = h0_stats.size() -
                 static_cast<std::size_t>(std::floor(n * pf + 1e-9));
  std::vector<double> sorted(h0_stats.begin(), h0_stats.end());
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  return sorted[k - 1];
}

std::vector<double> default_roc_grid() {
  std::vector<double> grid;
  const int log_points = 50;
  const double lo = std::log10(0.005);
  const double hi = std::log10(0.5);
  for (int i = 0; i < log_points; ++i) {
    grid.push_back(std::pow(10.0, lo + (hi - lo) * i / (log_points - 1)));
  }
  for (double pf = 0.55; pf < 0.96; pf += 0.05) {
    grid.push_back(pf);
  }
  return grid;
}

CurveTable roc_curve(const TrialBatch& batch, std::span<const double> pf_grid) {
  if (pf_grid.empty()) {
    throw std::invalid_argument("roc_curve: empty pf grid");
  }
  for (std::size_t i = 0; i < pf_grid.size(); ++i) {
    if (!(pf_grid[i] > 0.0 && pf_grid[i] < 1.0)) {
      throw std::invalid_argument("roc_curve: pf values must lie in (0, 1)");
    }
    if (i > 0 && !(pf_grid[i] > pf_grid[i - 1])) {
      throw std::invalid_argument("roc_curve: pf grid must be increasing");
    }
  }

  CurveTable curve;
  curve.kind = CurveKind::kRoc;
  curve.detector = batch.detector_name;
  curve.points.reserve(pf_grid.size());
  double last_pd = 0.0;
  for (double pf : pf_grid) {
    const double eta = empirical_threshold(batch.h0_stats, pf);
    std::size_t above = 0;
    for (double v : batch.h1_stats) {
      if (v > eta) ++above;
    }
    double pd =
        static_cast<double>(above) / static_cast<double>(batch.h1_stats.size());
    // The order-statistic thresholds make P_D nondecreasing already; the
    // running max guards the invariant against degenerate ties.
    pd = std::max(pd, last_pd);
    last_pd = pd;
    curve.points.push_back(CurvePoint{pf, pd});
  }
  return curve;
}

std::vector<CurveTable> power_curve(const ModelConfig& model,
                                    const std::vector<DetectorSpec>& specs,
                                    std::span<const double> snr_grid_db,
                                    double pf, int n_trials,
                                    std::uint64_t master_seed,
                                    const DetectorBankOptions& options) {
  if (snr_grid_db.empty()) {
    throw std::invalid_argument("power_curve: empty SNR grid");
  }
  for (std::size_t i = 1; i < snr_grid_db.size(); ++i) {
    if (!(snr_grid_db[i] > snr_grid_db[i - 1])) {
      throw std::invalid_argument("power_curve: SNR grid must be increasing");
    }
  }

  std::vector<CurveTable> curves(specs.size());
  for (std::size_t d = 0; d < specs.size(); ++d) {
    curves[d].kind = CurveKind::kPower;
    curves[d].detector = specs[d].name;
  }

  for (std::size_t point = 0; point < snr_grid_db.size(); ++point) {
    const double snr = snr_grid_db[point];
    const double sigma = model_sigma_for_snr_db(model, snr);
    const auto bank = make_detector_bank(model, sigma, specs, options);
    const auto point_seed =
        rng::substream_seed(master_seed, point, kStreamSnrPoint);
    const auto batches = run_trials(model, bank, n_trials, sigma, point_seed);
    for (std::size_t d = 0; d < batches.size(); ++d) {
      const double eta = empirical_threshold(batches[d].h0_stats, pf);
      std::size_t above = 0;
      for (double v : batches[d].h1_stats) {
        if (v > eta) ++above;
      }
      curves[d].points.push_back(CurvePoint{
          snr, static_cast<double>(above) /
                   static_cast<double>(batches[d].h1_stats.size())});
    }
  }
  return curves;
}

double auc(const CurveTable& curve) {
  if (curve.kind != CurveKind::kRoc) {
    throw std::invalid_argument("auc: requires a ROC curve");
  }
  double area = 0.0;
  double x_prev = 0.0;
  double y_prev = 0.0;
  for (const auto& pt : curve.points) {
    area += 0.5 * (pt.y + y_prev) * (pt.x - x_prev);
    x_prev = pt.x;
    y_prev = pt.y;
  }
  area += 0.5 * (1.0 + y_prev) * (1.0 - x_prev);
  return area;
}

}  // namespace spindet
