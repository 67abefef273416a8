#include "spindet/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "spindet/csv_io.hpp"
#include "spindet/rng.hpp"

namespace spindet {

namespace {

constexpr std::uint64_t kStreamSimulatePath = 10;
constexpr std::uint64_t kStreamSimulateH1 = 11;
constexpr std::uint64_t kStreamSimulateH0 = 12;
constexpr std::uint64_t kStreamCalibration = 13;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const ExperimentConfig& config, const std::string& key) {
  const auto it = config.values.find(key);
  std::size_t used = 0;
  const double v = std::stod(it->second, &used);
  if (used != it->second.size()) {
    throw std::invalid_argument("config: " + key + " is not a number: '" +
                                it->second + "'");
  }
  return v;
}

double get_double(const ExperimentConfig& config, const std::string& key,
                  double fallback) {
  return config.has(key) ? parse_double(config, key) : fallback;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void require_section(const ExperimentConfig& config, const std::string& name) {
  const std::string prefix = name + ".";
  for (const auto& [key, value] : config.values) {
    if (key.rfind(prefix, 0) == 0) return;
  }
  throw std::invalid_argument("config: missing [" + name + "] section");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::stringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'section.key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.find('.') == std::string::npos || key.empty() || value.empty()) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'section.key = value'");
    }
    config.values[key] = value;
  }
  return config;
}

std::string serialize_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [key, value] : config.values) {
    out += key + " = " + value + "\n";
  }
  return out;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

ResolvedExperiment resolve_experiment(const ExperimentConfig& config) {
  require_section(config, "model");
  require_section(config, "run");
  require_section(config, "noise");

  ResolvedExperiment exp{
      .model = TelegraphModel(1.0, 0.5, 0.5, 1, 1.0),
      .sigma = 0.0,
      .snr_db_value = 0.0,
      .n_samples = 0,
      .sample_period = 0.0,
      .n_trials = 0,
      .pf = 0.0,
      .seed = 0,
      .snr_grid_db = {},
      .detectors = {},
      .bank_options = {},
      .resolved_alpha = std::numeric_limits<double>::quiet_NaN()};

  // Samples: exactly one of run.N or run.T (with run.Ts).
  const bool has_n = config.has("run.N");
  const bool has_t = config.has("run.T");
  if (has_n == has_t) {
    throw std::invalid_argument(
        "config: exactly one of run.N or run.T (with run.Ts) is required");
  }
  exp.sample_period = get_double(config, "run.Ts", 1e-3);
  if (!(exp.sample_period > 0.0)) {
    throw std::invalid_argument("config: run.Ts must be > 0");
  }
  if (has_n) {
    const double n = parse_double(config, "run.N");
    if (!(n >= 1.0)) throw std::invalid_argument("config: run.N must be >= 1");
    exp.n_samples = static_cast<std::size_t>(n);
  } else {
    if (!config.has("run.Ts")) {
      throw std::invalid_argument("config: run.T requires run.Ts");
    }
    const double t = parse_double(config, "run.T");
    if (!(t > 0.0)) throw std::invalid_argument("config: run.T must be > 0");
    exp.n_samples =
        static_cast<std::size_t>(std::llround(t / exp.sample_period));
    if (exp.n_samples < 1) {
      throw std::invalid_argument("config: run.T / run.Ts rounds to zero");
    }
  }

  exp.n_trials = static_cast<int>(get_double(config, "run.n_trials", 2000));
  exp.pf = get_double(config, "run.pf", 0.1);
  exp.seed = static_cast<std::uint64_t>(get_double(config, "run.seed", 1));
  if (config.has("run.snr_grid_db")) {
    for (const auto& item : split_list(config.values.at("run.snr_grid_db"))) {
      exp.snr_grid_db.push_back(std::stod(item));
    }
  }

  // Model.
  const auto type_it = config.values.find("model.type");
  if (type_it == config.values.end()) {
    throw std::invalid_argument("config: missing model.type");
  }
  if (type_it->second == "telegraph") {
    const double amplitude = get_double(config, "model.A", 1.0);
    double p;
    if (config.has("model.lambda")) {
      if (config.has("model.p")) {
        throw std::invalid_argument(
            "config: give model.lambda or model.p, not both");
      }
      p = telegraph_p_from_rate(parse_double(config, "model.lambda"),
                                exp.sample_period);
    } else if (config.has("model.p")) {
      p = parse_double(config, "model.p");
    } else {
      throw std::invalid_argument("config: telegraph needs model.p or model.lambda");
    }
    const double q = get_double(config, "model.q", p);
    exp.model = TelegraphModel(amplitude, p, q, exp.n_samples,
                               exp.sample_period);
  } else if (type_it->second == "walk") {
    if (!config.has("model.M") || !config.has("model.s")) {
      throw std::invalid_argument("config: walk needs model.M and model.s");
    }
    const int m = static_cast<int>(parse_double(config, "model.M"));
    const double step = parse_double(config, "model.s");
    const double k1 = get_double(config, "model.K1", 0.5);
    const double k2 = get_double(config, "model.K2", 1.0 - k1);
    const double h1 = get_double(config, "model.H1", 0.5);
    const double h2 = get_double(config, "model.H2", 1.0 - h1);
    exp.model = WalkModel(m, step, k1, k2, h1, h2, exp.n_samples);
  } else {
    throw std::invalid_argument("config: model.type must be telegraph or walk");
  }

  // Noise: exactly one of sigma / snr_db.
  const bool has_sigma = config.has("noise.sigma");
  const bool has_snr = config.has("noise.snr_db");
  if (has_sigma == has_snr) {
    throw std::invalid_argument(
        "config: exactly one of noise.sigma or noise.snr_db is required");
  }
  if (has_sigma) {
    exp.sigma = parse_double(config, "noise.sigma");
    if (!(exp.sigma > 0.0)) {
      throw std::invalid_argument("config: noise.sigma must be > 0");
    }
    exp.snr_db_value = model_snr_db(exp.model, exp.sigma);
  } else {
    exp.snr_db_value = parse_double(config, "noise.snr_db");
    exp.sigma = model_sigma_for_snr_db(exp.model, exp.snr_db_value);
  }

  // Detectors.
  exp.bank_options.fit_paths =
      static_cast<int>(get_double(config, "detectors.fit_paths", 200));
  exp.bank_options.fit_seed =
      rng::substream_seed(exp.seed, 0, kStreamCalibration);

  std::vector<std::string> names;
  if (config.has("detectors.names")) {
    names = split_list(config.values.at("detectors.names"));
  }
  const auto& registered = registered_detector_names();
  for (const auto& name : names) {
    if (std::find(registered.begin(), registered.end(), name) ==
        registered.end()) {
      throw std::invalid_argument("config: unknown detector '" + name + "'");
    }
  }

  const std::string alpha_setting =
      config.has("detectors.alpha") ? config.values.at("detectors.alpha")
                                    : std::string("auto");
  const bool needs_alpha =
      std::find(names.begin(), names.end(), "filtered-energy") != names.end() ||
      std::find(names.begin(), names.end(), "hybrid") != names.end();
  const bool needs_equivalent =
      needs_alpha ||
      std::find(names.begin(), names.end(), "rt-lrt") != names.end();
  if (needs_equivalent &&
      (alpha_setting == "auto" ||
       std::find(names.begin(), names.end(), "rt-lrt") != names.end() ||
       std::find(names.begin(), names.end(), "hybrid") != names.end())) {
    exp.bank_options.equivalent = equivalent_telegraph(
        exp.model, exp.bank_options.fit_paths, exp.bank_options.fit_seed);
  }
  if (needs_alpha) {
    if (alpha_setting == "auto") {
      const auto& eq = *exp.bank_options.equivalent;
      exp.resolved_alpha = eq.p + eq.q - 1.0;
    } else {
      exp.resolved_alpha = std::stod(alpha_setting);
    }
  }
  for (const auto& name : names) {
    DetectorSpec spec{name, std::nullopt};
    if (name == "filtered-energy" || name == "hybrid") {
      spec.alpha = exp.resolved_alpha;
    }
    exp.detectors.push_back(std::move(spec));
  }

  return exp;
}

namespace {

Metadata model_metadata(const ResolvedExperiment& exp) {
  Metadata md;
  md.emplace_back("model", model_tag_name(exp.model));
  if (const auto* telegraph = std::get_if<TelegraphModel>(&exp.model)) {
    md.emplace_back("A", format_csv_double(telegraph->amplitude()));
    md.emplace_back("p", format_csv_double(telegraph->p()));
    md.emplace_back("q", format_csv_double(telegraph->q()));
  } else {
    const auto& walk = std::get<WalkModel>(exp.model);
    md.emplace_back("M", std::to_string(walk.half_states()));
    md.emplace_back("s", format_csv_double(walk.step()));
    md.emplace_back("K1", format_csv_double(walk.k1()));
    md.emplace_back("K2", format_csv_double(walk.k2()));
    md.emplace_back("H1", format_csv_double(walk.h1()));
    md.emplace_back("H2", format_csv_double(walk.h2()));
  }
  md.emplace_back("N", std::to_string(exp.n_samples));
  md.emplace_back("Ts", format_csv_double(exp.sample_period));
  return md;
}

std::string path_with_suffix(const std::string& out_path,
                             const std::string& suffix) {
  const std::string ext = ".csv";
  if (out_path.size() > ext.size() &&
      out_path.compare(out_path.size() - ext.size(), ext.size(), ext) == 0) {
    return out_path.substr(0, out_path.size() - ext.size()) + suffix + ext;
  }
  return out_path + suffix + ext;
}

}  // namespace

std::vector<std::string> cmd_simulate(const ExperimentConfig& config,
                                      const std::string& out_path) {
  const auto exp = resolve_experiment(config);
  const auto path = generate_path(
      exp.model, rng::substream_seed(exp.seed, 0, kStreamSimulatePath));
  const auto h1 =
      add_awgn(&path, exp.n_samples, exp.sigma,
               rng::substream_seed(exp.seed, 0, kStreamSimulateH1),
               Hypothesis::kH1);
  const auto h0 =
      add_awgn(nullptr, exp.n_samples, exp.sigma,
               rng::substream_seed(exp.seed, 0, kStreamSimulateH0),
               Hypothesis::kH0);
  const auto md = model_metadata(exp);
  const std::string h1_path = path_with_suffix(out_path, "_h1");
  const std::string h0_path = path_with_suffix(out_path, "_h0");
  write_observation_csv(h1_path, h1, md);
  write_observation_csv(h0_path, h0, md);
  return {h1_path, h0_path};
}

void cmd_detect(const ExperimentConfig& config, const std::string& csv_path,
                std::ostream& report) {
  const auto exp = resolve_experiment(config);
  if (exp.detectors.empty()) {
    throw std::invalid_argument("config: detectors.names is required for detect");
  }
  for (const auto& spec : exp.detectors) {
    if (spec.name == "mf") {
      throw std::invalid_argument(
          "detect: the omniscient matched filter needs the clean signal "
          "realization, which observation CSVs do not carry");
    }
  }
  const auto csv = read_observation_csv(csv_path);
  if (csv.samples.empty()) {
    throw std::runtime_error(csv_path + ": no samples");
  }
  const auto bank =
      make_detector_bank(exp.model, exp.sigma, exp.detectors, exp.bank_options);
  const SignalPath unused;
  for (const auto& detector : bank) {
    report << detector.name << ","
           << format_csv_double(detector.evaluate(csv.samples, unused)) << "\n";
  }
}

namespace {

Metadata run_metadata(const ResolvedExperiment& exp) {
  Metadata md = model_metadata(exp);
  md.emplace_back("sigma", format_csv_double(exp.sigma));
  md.emplace_back("snr_db", format_csv_double(exp.snr_db_value));
  md.emplace_back("n_trials", std::to_string(exp.n_trials));
  md.emplace_back("seed", std::to_string(exp.seed));
  md.emplace_back("pf", format_csv_double(exp.pf));
  if (std::isfinite(exp.resolved_alpha)) {
    md.emplace_back("alpha", format_csv_double(exp.resolved_alpha));
  }
  return md;
}

}  // namespace

void cmd_roc(const ExperimentConfig& config, const std::string& out_path) {
  const auto exp = resolve_experiment(config);
  if (exp.detectors.empty()) {
    throw std::invalid_argument("config: detectors.names is required for roc");
  }
  const auto bank =
      make_detector_bank(exp.model, exp.sigma, exp.detectors, exp.bank_options);
  const auto batches =
      run_trials(exp.model, bank, exp.n_trials, exp.sigma, exp.seed);
  const auto grid = default_roc_grid();
  std::vector<CurveTable> curves;
  curves.reserve(batches.size());
  for (const auto& batch : batches) {
    curves.push_back(roc_curve(batch, grid));
  }
  write_curves_csv(out_path, curves, run_metadata(exp));
}

void cmd_power(const ExperimentConfig& config, const std::string& out_path) {
  const auto exp = resolve_experiment(config);
  if (exp.detectors.empty()) {
    throw std::invalid_argument("config: detectors.names is required for power");
  }
  if (exp.snr_grid_db.empty()) {
    throw std::invalid_argument("config: run.snr_grid_db is required for power");
  }
  const auto curves =
      power_curve(exp.model, exp.detectors, exp.snr_grid_db, exp.pf,
                  exp.n_trials, exp.seed, exp.bank_options);
  write_curves_csv(out_path, curves, run_metadata(exp));
}

}  // namespace spindet
