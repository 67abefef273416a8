#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "spindet/mc_harness.hpp"

namespace spindet {

/// Flat `section.key = value` configuration. Keys are kept verbatim so that
/// parse -> serialize -> parse round-trips to an equal value.
struct ExperimentConfig {
  std::map<std::string, std::string> values;

  bool has(const std::string& key) const { return values.count(key) != 0; }
  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& config);
ExperimentConfig load_config_file(const std::string& path);

/// Everything a command needs, validated: the model, the noise level, trial
/// counts, seeds, and the detector set with `auto` alphas made concrete.
struct ResolvedExperiment {
  ModelConfig model;
  double sigma;
  double snr_db_value;
  std::size_t n_samples;
  double sample_period;
  int n_trials;
  double pf;
  std::uint64_t seed;
  std::vector<double> snr_grid_db;          // empty unless configured
  std::vector<DetectorSpec> detectors;      // alphas resolved to numbers
  DetectorBankOptions bank_options;         // carries the calibration result
  double resolved_alpha;                    // value behind `auto` (NaN if unused)
};

ResolvedExperiment resolve_experiment(const ExperimentConfig& config);

/// Writes an H1/H0 observation pair derived from `out_path` (stem_h1.csv and
/// stem_h0.csv). Returns the two paths written.
std::vector<std::string> cmd_simulate(const ExperimentConfig& config,
                                      const std::string& out_path);

/// Evaluates the configured detectors on an observation CSV, printing one
/// `name,value` line per detector. The omniscient matched filter cannot run
/// here (the clean realization is not part of the file format).
void cmd_detect(const ExperimentConfig& config, const std::string& csv_path,
                std::ostream& report);

void cmd_roc(const ExperimentConfig& config, const std::string& out_path);
void cmd_power(const ExperimentConfig& config, const std::string& out_path);

}  // namespace spindet
