#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spindet/signal_models.hpp"

namespace spindet {

using ModelConfig = std::variant<TelegraphModel, WalkModel>;

std::size_t model_n_samples(const ModelConfig& model);
SignalPath generate_path(const ModelConfig& model, std::uint64_t seed);
double model_snr_db(const ModelConfig& model, double sigma);
double model_sigma_for_snr_db(const ModelConfig& model, double snr_db_value);
std::string model_tag_name(const ModelConfig& model);

/// Registered detector names accepted by make_detector_bank.
const std::vector<std::string>& registered_detector_names();

/// Requested detector plus optional per-detector parameter. An absent alpha
/// means "auto": p + q - 1 for the telegraph model, the autocorrelation-fit
/// alpha for symmetric walks.
struct DetectorSpec {
  std::string name;
  std::optional<double> alpha;
};

/// A named statistic evaluator. The clean signal realization of the trial is
/// passed alongside the samples so the omniscient matched filter can
/// correlate against it (including on the H0 observation of the pair).
struct Detector {
  std::string name;
  std::function<double(std::span<const double>, const SignalPath&)> evaluate;
};

/// Telegraph parameters the telegraph-form detectors (rt-lrt, hybrid) use.
/// For a telegraph model these are the model's own values; for a symmetric
/// walk they come from the autocorrelation calibration, with the amplitude
/// matched to the walk's stationary RMS value.
struct EquivalentTelegraph {
  double amplitude;
  double p;
  double q;
};

EquivalentTelegraph equivalent_telegraph(const ModelConfig& model,
                                         int n_fit_paths,
                                         std::uint64_t fit_seed);

struct DetectorBankOptions {
  int fit_paths = 200;            // walk calibration sample size
  std::uint64_t fit_seed = 1905;  // substream id for calibration paths
  // Precomputed calibration result; set when the caller already ran the fit
  // (e.g. to report the resolved alpha) so the bank does not repeat it.
  std::optional<EquivalentTelegraph> equivalent;
};

std::vector<Detector> make_detector_bank(const ModelConfig& model,
                                         double sigma,
                                         const std::vector<DetectorSpec>& specs,
                                         const DetectorBankOptions& options = {});

/// Statistics of one detector over n paired trials.
struct TrialBatch {
  std::string detector_name;
  std::vector<double> h0_stats;
  std::vector<double> h1_stats;
  std::string fingerprint;  // model, sigma, seed, trial count
};

std::string experiment_fingerprint(const ModelConfig& model, double sigma,
                                   int n_trials, std::uint64_t master_seed);

/// Runs n_trials paired H0/H1 trials. Trial t draws its signal path and the
/// two noise vectors from counter-based substreams of (master_seed, t), so
/// the result is independent of scheduling; every detector sees the same
/// observations (paired comparison). Parallelized over trials.
std::vector<TrialBatch> run_trials(const ModelConfig& model,
                                   const std::vector<Detector>& detectors,
                                   int n_trials, double sigma,
                                   std::uint64_t master_seed);

/// Empirical Neyman-Pearson threshold: the ceil(n (1 - pf))-th smallest H0
/// statistic. The fraction of H0 statistics strictly above it is <= pf.
double empirical_threshold(std::span<const double> h0_stats, double pf);

enum class CurveKind { kRoc, kPower };

struct CurvePoint {
  double x;
  double y;
};

struct CurveTable {
  CurveKind kind = CurveKind::kRoc;
  std::string detector;
  std::vector<CurvePoint> points;
  std::vector<std::pair<std::string, std::string>> metadata;
};

/// 50 log-spaced false-alarm rates in [0.005, 0.5] plus a linear tail up
/// to 0.95.
std::vector<double> default_roc_grid();

/// P_D over the false-alarm grid, with the threshold calibrated from the H0
/// statistics at each grid point. P_D is nondecreasing by construction and
/// re-asserted before returning.
CurveTable roc_curve(const TrialBatch& batch, std::span<const double> pf_grid);

/// One power curve (P_D vs SNR dB at fixed pf) per detector spec. The noise
/// level is derived from the model per grid point, and detector constants
/// are rebuilt for each sigma.
std::vector<CurveTable> power_curve(const ModelConfig& model,
                                    const std::vector<DetectorSpec>& specs,
                                    std::span<const double> snr_grid_db,
                                    double pf, int n_trials,
                                    std::uint64_t master_seed,
                                    const DetectorBankOptions& options = {});

/// Trapezoidal area under a ROC curve, with (0,0) and (1,1) appended.
double auc(const CurveTable& curve);

}  // namespace spindet
