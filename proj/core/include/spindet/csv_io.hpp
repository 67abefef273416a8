#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "spindet/mc_harness.hpp"
#include "spindet/signal_models.hpp"

namespace spindet {

using Metadata = std::vector<std::pair<std::string, std::string>>;

std::string format_csv_double(double v);

/// Observation CSV: '#'-prefixed key=value metadata lines, then an
/// `index,value` header and one row per sample.
void write_observation_csv(const std::string& path,
                           const ObservationRecord& record,
                           const Metadata& metadata);

struct ObservationCsv {
  std::vector<double> samples;
  std::map<std::string, std::string> metadata;
};

ObservationCsv read_observation_csv(const std::string& path);

/// Curve CSV: metadata comments, then `pf,pd,detector` (ROC) or
/// `snr_db,pd,detector` (power) rows, one block per curve.
void write_curves_csv(const std::string& path,
                      const std::vector<CurveTable>& curves,
                      const Metadata& metadata);

}  // namespace spindet
