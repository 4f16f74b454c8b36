// Regenerate the frozen 10-step reference traces under tests/golden/.
// Run manually from the repository root when a deliberate algorithm change
// invalidates them; the bitwise-stability test compares against these files.

#include <filesystem>
#include <iostream>

#include "saddle/experiment.hpp"
#include "saddle/trace.hpp"

using namespace saddle;

int main(int argc, char** argv) {
  std::string out = argc > 1 ? argv[1] : "tests/golden";
  std::filesystem::create_directories(out);

  RunConfig cfg;
  cfg.problem = "almost_bilinear";
  cfg.epsilon = 0.01;
  cfg.dim = 1;
  cfg.solvers = {{"eag_fixed", 0},   {"eag_moving", -1}, {"eag_moving", +1},
                 {"eag_stochastic", -1}, {"popov_fixed", 0}, {"popov_v1", -1},
                 {"popov_v2", -1},   {"reflected", 0}};
  cfg.oracle = OracleConfig::Kind::Coordinate;
  cfg.k_bar_auto = true;
  cfg.eta_half_alpha = true;
  cfg.max_iter = 10;
  cfg.grad_tol = 0.0;
  cfg.seeds = {42};
  cfg.out_dir = out;

  auto outcome = run_experiment(cfg);
  if (outcome.exit_code != 0) {
    std::cerr << "golden generation failed: " << outcome.message << "\n";
    return 1;
  }
  // the summary and helper files are not part of the frozen set
  std::filesystem::remove(std::filesystem::path(out) / "summary.csv");
  std::filesystem::remove(std::filesystem::path(out) / "plot.py");
  std::filesystem::remove(std::filesystem::path(out) / "config.txt");
  std::cout << "wrote " << outcome.trace_files.size() << " golden traces to " << out
            << "\n";

  // version-pinned preset summaries
  for (const std::string name : {"figure1", "figure2", "figure3"}) {
    std::string dir = out + "/preset_" + name;
    RunConfig pc = preset_config(name, dir, 1);
    auto po = run_experiment(pc);
    if (po.exit_code != 0) {
      std::cerr << "preset " << name << " failed: " << po.message << "\n";
      return 1;
    }
    std::filesystem::rename(po.summary_file,
                            std::filesystem::path(out) / (name + "_summary.csv"));
    std::filesystem::remove_all(dir);
    std::cout << "pinned " << name << "_summary.csv\n";
  }
  return 0;
}
