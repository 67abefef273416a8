// Command-line front end: simulate observation pairs, evaluate detectors on
// an observation CSV, and produce ROC / power-curve CSVs from Monte-Carlo
// runs described by a flat `section.key = value` config file.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "spindet/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long long trials = 0;
  bool trials_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_out) {
  cmd->add_option("--config", args.config_path, "experiment config file")
      ->required();
  auto* out = cmd->add_option("--out", args.out_path, "output CSV path");
  if (needs_out) out->required();
  cmd->add_option("--seed", args.seed, "override run.seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--trials", args.trials, "override run.n_trials")
      ->each([&args](const std::string&) { args.trials_set = true; });
}

spindet::ExperimentConfig load_with_overrides(const CommonArgs& args) {
  auto config = spindet::load_config_file(args.config_path);
  if (args.seed_set) {
    config.values["run.seed"] = std::to_string(args.seed);
  }
  if (args.trials_set) {
    config.values["run.n_trials"] = std::to_string(args.trials);
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo spin-detection toolkit"};
  app.require_subcommand(1);

  CommonArgs sim_args, det_args, roc_args, power_args;
  std::string detect_input;

  auto* simulate = app.add_subcommand(
      "simulate", "write one H1/H0 observation CSV pair");
  add_common(simulate, sim_args, true);

  auto* detect = app.add_subcommand(
      "detect", "evaluate the configured detectors on an observation CSV");
  add_common(detect, det_args, false);
  detect->add_option("input", detect_input, "observation CSV")->required();

  auto* roc = app.add_subcommand("roc", "simulate ROC curves");
  add_common(roc, roc_args, true);

  auto* power = app.add_subcommand("power", "simulate power curves");
  add_common(power, power_args, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      const auto written =
          spindet::cmd_simulate(load_with_overrides(sim_args), sim_args.out_path);
      for (const auto& path : written) {
        std::cout << "wrote " << path << "\n";
      }
    } else if (detect->parsed()) {
      spindet::cmd_detect(load_with_overrides(det_args), detect_input,
                          std::cout);
    } else if (roc->parsed()) {
      spindet::cmd_roc(load_with_overrides(roc_args), roc_args.out_path);
      std::cout << "wrote " << roc_args.out_path << "\n";
    } else if (power->parsed()) {
      spindet::cmd_power(load_with_overrides(power_args), power_args.out_path);
      std::cout << "wrote " << power_args.out_path << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
