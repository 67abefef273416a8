#include "spindet/experiment.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spindet/csv_io.hpp"

using namespace spindet;

namespace {

const char* kTelegraphConfig = R"(
# symmetric telegraph, tiny run for tests
model.type = telegraph
model.A = 1.0
model.lambda = 0.5

noise.snr_db = -35.0

run.T = 60
run.Ts = 0.001
run.n_trials = 16
run.seed = 9

detectors.names = amplitude,energy
)";

std::filesystem::path temp_dir() {
  const auto dir =
      std::filesystem::temp_directory_path() / "spindet_experiment_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST(ConfigParse, RoundTripsToEqualValue) {
  const auto config = parse_config(kTelegraphConfig);
  const auto again = parse_config(serialize_config(config));
  EXPECT_EQ(config, again);
  EXPECT_EQ(config.values.at("model.lambda"), "0.5");
}

TEST(ConfigParse, RejectsMalformedLines) {
  EXPECT_THROW(parse_config("model.type telegraph\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("justakey = 1\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("model.type =\n"), std::invalid_argument);
}

TEST(ResolveExperiment, LambdaGivesPaperTransitionProbability) {
  const auto exp = resolve_experiment(parse_config(kTelegraphConfig));
  const auto& model = std::get<TelegraphModel>(exp.model);
  EXPECT_DOUBLE_EQ(model.p(), 0.9995);
  EXPECT_DOUBLE_EQ(model.q(), 0.9995);
  EXPECT_EQ(exp.n_samples, 60000u);
  EXPECT_NEAR(exp.sigma, 56.2341325190349, 1e-10);
}

TEST(ResolveExperiment, MissingSectionsAreNamed) {
  try {
    resolve_experiment(parse_config("run.N = 10\nnoise.sigma = 1\n"));
    FAIL() << "expected an exception";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("model"), std::string::npos);
  }
}

TEST(ResolveExperiment, ExactlyOneNoiseSpecification) {
  auto config = parse_config(kTelegraphConfig);
  config.values["noise.sigma"] = "3.0";
  EXPECT_THROW(resolve_experiment(config), std::invalid_argument);
  config.values.erase("noise.sigma");
  config.values.erase("noise.snr_db");
  EXPECT_THROW(resolve_experiment(config), std::invalid_argument);
}

TEST(ResolveExperiment, ExactlyOneDurationSpecification) {
  auto config = parse_config(kTelegraphConfig);
  config.values["run.N"] = "100";
  EXPECT_THROW(resolve_experiment(config), std::invalid_argument);
  config.values.erase("run.T");
  EXPECT_NO_THROW(resolve_experiment(config));
  EXPECT_EQ(resolve_experiment(config).n_samples, 100u);
}

TEST(ResolveExperiment, UnknownDetectorIsRejected) {
  auto config = parse_config(kTelegraphConfig);
  config.values["detectors.names"] = "energy,quantum-oracle";
  EXPECT_THROW(resolve_experiment(config), std::invalid_argument);
}

TEST(ResolveExperiment, AutoAlphaIsCorrelationCoefficient) {
  auto config = parse_config(kTelegraphConfig);
  config.values["detectors.names"] = "filtered-energy,hybrid";
  const auto exp = resolve_experiment(config);
  EXPECT_NEAR(exp.resolved_alpha, 2.0 * 0.9995 - 1.0, 1e-12);
  ASSERT_EQ(exp.detectors.size(), 2u);
  ASSERT_TRUE(exp.detectors[0].alpha.has_value());
  EXPECT_DOUBLE_EQ(*exp.detectors[0].alpha, exp.resolved_alpha);
}

TEST(ResolveExperiment, ExplicitAlphaWins) {
  auto config = parse_config(kTelegraphConfig);
  config.values["detectors.names"] = "filtered-energy";
  config.values["detectors.alpha"] = "0.875";
  const auto exp = resolve_experiment(config);
  EXPECT_DOUBLE_EQ(exp.resolved_alpha, 0.875);
}

TEST(CmdSimulate, WritesObservationPairWithMetadata) {
  auto config = parse_config(kTelegraphConfig);
  config.values["run.T"] = "2";  // 2000 samples keeps the test fast
  const auto out = temp_dir() / "sim.csv";
  const auto written = cmd_simulate(config, out.string());
  ASSERT_EQ(written.size(), 2u);

  const auto h1 = read_observation_csv(written[0]);
  const auto h0 = read_observation_csv(written[1]);
  EXPECT_EQ(h1.samples.size(), 2000u);
  EXPECT_EQ(h0.samples.size(), 2000u);
  EXPECT_EQ(h1.metadata.at("hypothesis"), "H1");
  EXPECT_EQ(h0.metadata.at("hypothesis"), "H0");
  EXPECT_EQ(h1.metadata.at("p"), "0.9995");
  EXPECT_EQ(h1.metadata.at("model"), "telegraph");

  // The emitted file carries the promised literal metadata line.
  const auto text = slurp(written[0]);
  EXPECT_NE(text.find("# p=0.9995\n"), std::string::npos);
  EXPECT_NE(text.find("index,value\n"), std::string::npos);
}

TEST(CmdSimulate, DeterministicForFixedSeed) {
  auto config = parse_config(kTelegraphConfig);
  config.values["run.T"] = "1";
  const auto out_a = temp_dir() / "det_a.csv";
  const auto out_b = temp_dir() / "det_b.csv";
  cmd_simulate(config, out_a.string());
  cmd_simulate(config, out_b.string());
  EXPECT_EQ(slurp(temp_dir() / "det_a_h1.csv"), slurp(temp_dir() / "det_b_h1.csv"));
  EXPECT_EQ(slurp(temp_dir() / "det_a_h0.csv"), slurp(temp_dir() / "det_b_h0.csv"));
}

TEST(CmdDetect, HandComputableStatistics) {
  // Constant-ones file: amplitude = 1, energy = N.
  const auto dir = temp_dir();
  const auto obs = dir / "ones.csv";
  {
    std::ofstream out(obs);
    out << "index,value\n";
    for (int i = 0; i < 8; ++i) out << i << ",1\n";
  }
  auto config = parse_config(kTelegraphConfig);
  config.values["run.N"] = "8";
  config.values.erase("run.T");

  std::ostringstream report;
  cmd_detect(config, obs.string(), report);
  EXPECT_NE(report.str().find("amplitude,1\n"), std::string::npos);
  EXPECT_NE(report.str().find("energy,8\n"), std::string::npos);
}

TEST(CmdDetect, ZeroFileHasZeroEnergy) {
  const auto dir = temp_dir();
  const auto obs = dir / "zeros.csv";
  {
    std::ofstream out(obs);
    out << "index,value\n";
    for (int i = 0; i < 4; ++i) out << i << ",0\n";
  }
  auto config = parse_config(kTelegraphConfig);
  config.values["run.N"] = "4";
  config.values.erase("run.T");
  std::ostringstream report;
  cmd_detect(config, obs.string(), report);
  EXPECT_NE(report.str().find("energy,0\n"), std::string::npos);
}

TEST(CmdDetect, SingleSampleLogLrtClosedForm) {
  const auto dir = temp_dir();
  const auto obs = dir / "single.csv";
  const double y0 = 0.8;
  {
    std::ofstream out(obs);
    out << "index,value\n0," << y0 << "\n";
  }
  auto config = parse_config(kTelegraphConfig);
  config.values["run.N"] = "1";
  config.values.erase("run.T");
  config.values["noise.sigma"] = "2.0";
  config.values.erase("noise.snr_db");
  config.values["detectors.names"] = "rt-lrt";

  std::ostringstream report;
  cmd_detect(config, obs.string(), report);
  const auto line = report.str();
  const auto comma = line.find(',');
  ASSERT_NE(comma, std::string::npos);
  const double value = std::stod(line.substr(comma + 1));
  EXPECT_NEAR(value, std::log(std::cosh(1.0 * y0 / 4.0)), 1e-12);
}

TEST(CmdDetect, MatchedFilterIsRejected) {
  auto config = parse_config(kTelegraphConfig);
  config.values["detectors.names"] = "mf";
  const auto dir = temp_dir();
  const auto obs = dir / "any.csv";
  {
    std::ofstream out(obs);
    out << "index,value\n0,1\n";
  }
  std::ostringstream report;
  EXPECT_THROW(cmd_detect(config, obs.string(), report), std::invalid_argument);
}

TEST(CmdRoc, WritesCurvePerDetectorDeterministically) {
  auto config = parse_config(kTelegraphConfig);
  config.values["run.T"] = "1";  // 1000 samples
  config.values["run.n_trials"] = "250";
  config.values["noise.snr_db"] = "-5";
  config.values["detectors.names"] = "amplitude,energy,filtered-energy";

  const auto out = temp_dir() / "roc.csv";
  cmd_roc(config, out.string());
  const auto text = slurp(out);
  EXPECT_NE(text.find("pf,pd,detector\n"), std::string::npos);
  EXPECT_NE(text.find(",amplitude\n"), std::string::npos);
  EXPECT_NE(text.find(",energy\n"), std::string::npos);
  EXPECT_NE(text.find(",filtered-energy\n"), std::string::npos);
  EXPECT_NE(text.find("# n_trials=250\n"), std::string::npos);

  const auto out2 = temp_dir() / "roc2.csv";
  cmd_roc(config, out2.string());
  EXPECT_EQ(text, slurp(out2));
}

TEST(CmdPower, WritesGridPerDetector) {
  auto config = parse_config(kTelegraphConfig);
  config.values["run.T"] = "1";
  config.values["run.n_trials"] = "60";
  config.values["run.snr_grid_db"] = "-10,0,10";
  config.values["detectors.names"] = "energy";

  const auto out = temp_dir() / "power.csv";
  cmd_power(config, out.string());
  const auto text = slurp(out);
  EXPECT_NE(text.find("snr_db,pd,detector\n"), std::string::npos);
  EXPECT_NE(text.find("-10,"), std::string::npos);
  EXPECT_NE(text.find("10,"), std::string::npos);

  auto no_grid = config;
  no_grid.values.erase("run.snr_grid_db");
  EXPECT_THROW(cmd_power(no_grid, out.string()), std::invalid_argument);
}
