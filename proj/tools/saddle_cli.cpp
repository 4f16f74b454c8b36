// Experiment runner for the anchored saddle-point solvers.
//
//   saddle_cli run <config> [--workers N]
//   saddle_cli verify <config>
//   saddle_cli preset <figure1|figure2|figure3> [--out DIR] [--workers N] [--seed-base S]
//
// Exit codes: 0 success, 2 invalid config, 3 divergence during a run,
// 4 missing or corrupt traces.

#include <iostream>

#include <CLI11.hpp>

#include "saddle/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"anchored extragradient saddle-point experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string preset_name;
  std::string out_dir;
  int workers = 1;
  uint64_t seed_base = 1;

  auto* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("config", config_path, "key = value config file")->required();
  run->add_option("--workers", workers, "parallel (solver, seed) cells");

  auto* verify = app.add_subcommand("verify", "run diagnostics over existing traces");
  verify->add_option("config", config_path, "config whose traces to verify")->required();

  auto* preset = app.add_subcommand("preset", "run a built-in experiment preset");
  preset->add_option("name", preset_name, "figure1 | figure2 | figure3")->required();
  preset->add_option("--out", out_dir, "output directory (default out/<name>)");
  preset->add_option("--workers", workers, "parallel (solver, seed) cells");
  preset->add_option("--seed-base", seed_base, "first seed of the grid");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      saddle::RunConfig cfg;
      try {
        cfg = saddle::RunConfig::parse_file(config_path);
        cfg.validate();
      } catch (const saddle::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      auto outcome = saddle::run_experiment(cfg, workers, &std::cerr);
      if (!outcome.message.empty()) std::cerr << outcome.message << "\n";
      std::cout << "wrote " << outcome.trace_files.size() << " trace files and "
                << outcome.summary_file << "\n";
      return outcome.exit_code;
    }
    if (verify->parsed()) {
      saddle::RunConfig cfg;
      try {
        cfg = saddle::RunConfig::parse_file(config_path);
        cfg.validate();
      } catch (const saddle::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      return saddle::verify_experiment(cfg, std::cout);
    }
    if (preset->parsed()) {
      saddle::RunConfig cfg;
      try {
        cfg = saddle::preset_config(preset_name, out_dir, seed_base);
        cfg.validate();
      } catch (const saddle::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      auto outcome = saddle::run_experiment(cfg, workers, &std::cerr);
      if (!outcome.message.empty()) std::cerr << outcome.message << "\n";
      std::cout << "wrote " << outcome.trace_files.size() << " trace files under "
                << cfg.out_dir << "\n";
      return outcome.exit_code;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
