#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace spindet {

enum class Hypothesis { kH0, kH1 };

std::string to_string(Hypothesis h);
Hypothesis hypothesis_from_string(const std::string& s);

enum class ModelTag { kTelegraph, kWalk };

/// Two-state (+A/-A) Markov signal model. `p` is the probability of staying
/// at +A, `q` of staying at -A; both must lie strictly inside (0, 1).
class TelegraphModel {
 public:
  TelegraphModel(double amplitude, double p, double q, std::size_t n_samples,
                 double sample_period_s);

  double amplitude() const { return amplitude_; }
  double p() const { return p_; }
  double q() const { return q_; }
  std::size_t n_samples() const { return n_samples_; }
  double sample_period() const { return sample_period_; }

  // r = p + q - 1; the lag-1 correlation coefficient of the chain.
  double correlation_r() const { return p_ + q_ - 1.0; }
  // C_m = (p - q) / (2 - p - q); steady-state mean is C_m * amplitude.
  double mean_coefficient() const { return (p_ - q_) / (2.0 - p_ - q_); }

 private:
  double amplitude_;
  double p_;
  double q_;
  std::size_t n_samples_;
  double sample_period_;
};

/// Reflecting random walk on the 2M+1 states {-Ms, ..., -s, 0, +s, ..., +Ms}.
/// Every step moves by exactly one state; the end states bounce back inward
/// with probability 1. Interior rows use the lower-quartile probabilities
/// (K1 down / K2 up), 0.5/0.5 in the middle half, and the upper-quartile
/// probabilities (H1 down / H2 up). K1+K2 and H1+H2 must each equal 1.
class WalkModel {
 public:
  WalkModel(int half_states, double step, double k1, double k2, double h1,
            double h2, std::size_t n_samples);

  int half_states() const { return half_states_; }      // M
  double step() const { return step_; }                 // s
  double k1() const { return k1_; }
  double k2() const { return k2_; }
  double h1() const { return h1_; }
  double h2() const { return h2_; }
  std::size_t n_samples() const { return n_samples_; }

  int state_count() const { return 2 * half_states_ + 1; }
  double state_value(int index) const {
    return (index - half_states_) * step_;
  }

  // Tridiagonal transition probabilities of row i: move to i-1 with
  // down_probability(i), to i+1 with up_probability(i). The diagonal is zero.
  double down_probability(int i) const { return down_[static_cast<std::size_t>(i)]; }
  double up_probability(int i) const { return up_[static_cast<std::size_t>(i)]; }

  // Dense P with P[i][j] = P(state j at k | state i at k-1). For tests and
  // small-instance oracles; the simulation paths use the tridiagonal form.
  std::vector<std::vector<double>> dense_transition_matrix() const;

 private:
  int half_states_;
  double step_;
  double k1_, k2_, h1_, h2_;
  std::size_t n_samples_;
  std::vector<double> down_, up_;
};

struct SignalPath {
  std::vector<double> values;
  ModelTag model_tag = ModelTag::kTelegraph;
};

/// One length-N observation vector together with how it was generated.
/// Under H1 the clean signal realization is retained so the omniscient
/// matched filter can correlate against it.
struct ObservationRecord {
  std::vector<double> samples;
  double sigma = 0.0;
  Hypothesis hypothesis = Hypothesis::kH0;
  std::uint64_t seed = 0;
  std::optional<SignalPath> clean_path;
};

SignalPath gen_telegraph(const TelegraphModel& model, std::uint64_t seed);
SignalPath gen_random_walk(const WalkModel& model, std::uint64_t seed);

/// y = clean + w (H1) or y = w (H0), w ~ iid N(0, sigma^2). Under H1 `path`
/// must be non-null with length n; under H0 it must be null.
ObservationRecord add_awgn(const SignalPath* path, std::size_t n, double sigma,
                           std::uint64_t seed, Hypothesis hypothesis);

/// SNR in dB: steady-state expected signal energy over noise variance.
double snr_db(const TelegraphModel& model, double sigma);
double snr_db(const WalkModel& model, double sigma);

/// Noise level that realizes a requested SNR for the given model.
double sigma_for_snr_db(const TelegraphModel& model, double snr_db_value);
double sigma_for_snr_db(const WalkModel& model, double snr_db_value);

/// Steady-state E[zeta^2] of the walk under its stationary distribution.
double stationary_mean_square(const WalkModel& model);

/// Stationary distribution of the walk chain, pi P = pi, sum(pi) = 1.
std::vector<double> stationary_distribution(const WalkModel& model);

/// p = 1 - Ts * lambda: matches the discrete chain's expected transition
/// count to a Poisson reversal rate of lambda per second.
double telegraph_p_from_rate(double lambda, double sample_period_s);

/// alpha = (1 - sin wc) / cos wc for a -3dB bandwidth of wc rad/sample.
double alpha_from_bandwidth(double omega_c);

double physical_amplitude(double spring_k, double omega0, double b1,
                          double gradient_g, double mu);

/// Mean normalized autocorrelation rho(1..max_lag) pooled over paths
/// (grand-mean removed, lag-0 normalized).
std::vector<double> mean_normalized_autocorrelation(
    const std::vector<SignalPath>& paths, int max_lag);

/// Least-squares fit of rho(k) ~ (2p-1)^k over k = 1..rho.size().
double fit_symmetric_p(const std::vector<double>& rho);

struct TelegraphFit {
  double p_hat;
  double alpha;  // = 2 p_hat - 1
};

/// Calibrates an equivalent symmetric telegraph to a symmetric walk by
/// matching the empirical autocorrelation of `n_paths` walk realizations.
/// Only defined when K1 == H2 and K2 == H1.
TelegraphFit fit_telegraph_alpha_to_walk(const WalkModel& model, int n_paths,
                                         std::uint64_t seed);

}  // namespace spindet
