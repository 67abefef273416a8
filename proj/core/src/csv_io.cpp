#include "spindet/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spindet {

std::string format_csv_double(double v) {
  // Shortest representation that round-trips to the same double.
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

void write_observation_csv(const std::string& path,
                           const ObservationRecord& record,
                           const Metadata& metadata) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  for (const auto& [key, value] : metadata) {
    out << "# " << key << "=" << value << "\n";
  }
  out << "# hypothesis=" << to_string(record.hypothesis) << "\n";
  out << "# sigma=" << format_csv_double(record.sigma) << "\n";
  out << "# seed=" << record.seed << "\n";
  out << "index,value\n";
  for (std::size_t i = 0; i < record.samples.size(); ++i) {
    out << i << "," << format_csv_double(record.samples[i]) << "\n";
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

ObservationCsv read_observation_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  ObservationCsv result;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      const auto start = body.find_first_not_of(' ');
      if (start == std::string::npos) continue;
      body = body.substr(start);
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        result.metadata[body.substr(0, eq)] = body.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen) {
      if (line != "index,value") {
        throw std::runtime_error(path + ": expected 'index,value' header, got '" +
                                 line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(path + ": malformed row '" + line + "'");
    }
    result.samples.push_back(std::stod(line.substr(comma + 1)));
  }
  if (!header_seen) {
    throw std::runtime_error(path + ": missing 'index,value' header");
  }
  return result;
}

void write_curves_csv(const std::string& path,
                      const std::vector<CurveTable>& curves,
                      const Metadata& metadata) {
  if (curves.empty()) {
    throw std::invalid_argument("write_curves_csv: no curves");
  }
  const CurveKind kind = curves.front().kind;
  for (const auto& curve : curves) {
    if (curve.kind != kind) {
      throw std::invalid_argument("write_curves_csv: mixed curve kinds");
    }
  }
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  for (const auto& [key, value] : metadata) {
    out << "# " << key << "=" << value << "\n";
  }
  out << (kind == CurveKind::kRoc ? "pf,pd,detector" : "snr_db,pd,detector")
      << "\n";
  for (const auto& curve : curves) {
    for (const auto& pt : curve.points) {
      out << format_csv_double(pt.x) << "," << format_csv_double(pt.y) << ","
          << curve.detector << "\n";
    }
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace spindet
