#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "saddle/oracles.hpp"
#include "saddle/problems.hpp"
#include "saddle/schedules.hpp"
#include "saddle/solver_eag.hpp"
#include "saddle/solver_popov.hpp"

namespace saddle {

/// One solver cell of an experiment grid: a family plus its anchor sign.
/// Families: eag_fixed, eag_moving, eag_stochastic, popov_fixed, popov_v1,
/// popov_v2, reflected. Moving families default to sign -1.
struct SolverSpec {
  std::string family;
  int gamma_sign = -1;

  std::string tag() const;  // family plus _neg/_pos suffix where applicable
};

/// A full experiment description, parsed from a key = value text file.
/// Unknown keys are rejected; every field is validated before any run starts.
struct RunConfig {
  // problem
  std::string problem = "almost_bilinear";  // or simplex_game
  double epsilon = 0.01;
  int dim = 1;
  int game_n = 48;
  int game_m = 2;
  uint64_t game_seed = 7;
  double lambda = 0.01;
  std::vector<double> z0;  // empty = problem default start

  // solvers
  std::vector<SolverSpec> solvers;

  // oracle (stochastic families)
  OracleConfig::Kind oracle = OracleConfig::Kind::AdditiveNoise;
  int batch = 1;
  double noise_sigma = 1.0;
  double noise_decay = 4.0;
  bool k_bar_auto = true;    // theory value: N^2 coordinate, N/b-ish minibatch, 1 otherwise
  double k_bar_value = 1.0;  // override when k_bar_auto is false

  // schedule
  bool paper_defaults = true;  // alpha0/c0 from the experiment initialization constants
  double alpha0 = 0.0;
  double c0 = 0.0;
  DeltaRule delta_rule = DeltaRule::InverseSquare;
  double geometric_ratio = 0.5;

  // popov stepsize
  bool eta_half_alpha = true;
  double eta_constant = 0.0;

  // execution
  long max_iter = 1000;
  double grad_tol = 0.0;  // on ||G||^2; 0 disables early stop
  std::vector<uint64_t> seeds;
  std::string out_dir = "out";

  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_text(const std::string& text);
  void validate() const;  // throws ConfigError naming the offending field
  std::string to_text() const;
};

std::unique_ptr<Problem> make_problem(const RunConfig& cfg);
Point default_start(const RunConfig& cfg, const Problem& problem);
double resolve_k_bar(const RunConfig& cfg, int N);
ScheduleConfig make_schedule(const RunConfig& cfg, const Problem& problem,
                             const SolverSpec& solver);

/// Trace file name for one cell: <tag>_seed<seed>.csv
std::string cell_filename(const SolverSpec& solver, uint64_t seed);

struct ExperimentOutcome {
  int exit_code = 0;  // 0 ok, 2 invalid config, 3 divergence (partial traces kept)
  std::vector<std::string> trace_files;
  std::string summary_file;
  std::string message;
};

/// Run the full (solver x seed) grid, write one trace CSV per cell plus
/// summary.csv, deterministically regardless of worker count.
ExperimentOutcome run_experiment(const RunConfig& cfg, int workers = 1,
                                 std::ostream* log = nullptr);

/// Re-read the traces of a completed experiment and run the diagnostics
/// suite. Returns 0 when all hard checks pass, 4 when traces are missing or
/// corrupt, 1 when a hard assertion fails.
int verify_experiment(const RunConfig& cfg, std::ostream& report);

/// Built-in experiment presets: figure1, figure2, figure3.
RunConfig preset_config(const std::string& name, const std::string& out_dir,
                        uint64_t seed_base);

/// Emit a small matplotlib stub next to the traces.
void write_plot_stub(const RunConfig& cfg);

}  // namespace saddle
