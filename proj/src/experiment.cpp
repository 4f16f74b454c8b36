#include "saddle/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "saddle/diagnostics.hpp"

namespace fs = std::filesystem;

namespace saddle {

namespace {

const std::set<std::string> kFamilies = {
    "eag_fixed",  "eag_moving", "eag_stochastic", "popov_fixed",
    "popov_v1",   "popov_v2",   "reflected"};

bool family_is_moving(const std::string& f) {
  return f == "eag_moving" || f == "eag_stochastic" || f == "popov_v1" || f == "popov_v2";
}

bool family_is_stochastic(const std::string& f) { return f == "eag_stochastic"; }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "not a number: '" + v + "'");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key, "not an integer: '" + v + "'");
  }
}

}  // namespace

std::string SolverSpec::tag() const {
  if (!family_is_moving(family)) return family;
  if (gamma_sign < 0) return family + "_neg";
  if (gamma_sign > 0) return family + "_pos";
  return family + "_zero";
}

RunConfig RunConfig::parse_text(const std::string& text) {
  RunConfig cfg;
  cfg.solvers.clear();
  cfg.seeds.clear();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected key = value");
    auto strip = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = strip(line.substr(0, eq));
    std::string val = strip(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");

    if (key == "problem") cfg.problem = val;
    else if (key == "epsilon") cfg.epsilon = parse_double(key, val);
    else if (key == "dim") cfg.dim = static_cast<int>(parse_long(key, val));
    else if (key == "game_n") cfg.game_n = static_cast<int>(parse_long(key, val));
    else if (key == "game_m") cfg.game_m = static_cast<int>(parse_long(key, val));
    else if (key == "game_seed") cfg.game_seed = static_cast<uint64_t>(parse_long(key, val));
    else if (key == "lambda") cfg.lambda = parse_double(key, val);
    else if (key == "z0") {
      for (const auto& c : split_list(val)) cfg.z0.push_back(parse_double(key, c));
    } else if (key == "solvers") {
      for (const auto& c : split_list(val)) {
        SolverSpec s;
        auto colon = c.find(':');
        if (colon == std::string::npos) {
          s.family = c;
          s.gamma_sign = family_is_moving(c) ? -1 : 0;
        } else {
          s.family = c.substr(0, colon);
          std::string sign = c.substr(colon + 1);
          if (sign == "-1" || sign == "neg") s.gamma_sign = -1;
          else if (sign == "+1" || sign == "1" || sign == "pos") s.gamma_sign = +1;
          else if (sign == "0") s.gamma_sign = 0;
          else throw ConfigError("solvers", "bad gamma sign '" + sign + "'");
        }
        cfg.solvers.push_back(s);
      }
    } else if (key == "oracle") {
      if (val == "exact") cfg.oracle = OracleConfig::Kind::Exact;
      else if (val == "coordinate") cfg.oracle = OracleConfig::Kind::Coordinate;
      else if (val == "minibatch") cfg.oracle = OracleConfig::Kind::Minibatch;
      else if (val == "additive_noise") cfg.oracle = OracleConfig::Kind::AdditiveNoise;
      else throw ConfigError("oracle", "unknown oracle '" + val + "'");
    } else if (key == "batch") cfg.batch = static_cast<int>(parse_long(key, val));
    else if (key == "noise_sigma") cfg.noise_sigma = parse_double(key, val);
    else if (key == "noise_decay") cfg.noise_decay = parse_double(key, val);
    else if (key == "k_bar") {
      if (val == "auto") cfg.k_bar_auto = true;
      else {
        cfg.k_bar_auto = false;
        cfg.k_bar_value = parse_double(key, val);
      }
    } else if (key == "alpha0") {
      if (val == "paper_default") cfg.paper_defaults = true;
      else {
        cfg.paper_defaults = false;
        cfg.alpha0 = parse_double(key, val);
      }
    } else if (key == "c0") {
      if (val != "paper_default") cfg.c0 = parse_double(key, val);
    } else if (key == "delta_rule") {
      if (val == "inv_square") cfg.delta_rule = DeltaRule::InverseSquare;
      else if (val == "geometric") cfg.delta_rule = DeltaRule::Geometric;
      else throw ConfigError("delta_rule", "unknown rule '" + val + "'");
    } else if (key == "geometric_ratio") cfg.geometric_ratio = parse_double(key, val);
    else if (key == "eta") {
      if (val == "half_alpha") cfg.eta_half_alpha = true;
      else {
        cfg.eta_half_alpha = false;
        cfg.eta_constant = parse_double(key, val);
      }
    } else if (key == "max_iter") cfg.max_iter = parse_long(key, val);
    else if (key == "grad_tol") cfg.grad_tol = parse_double(key, val);
    else if (key == "seeds") {
      for (const auto& c : split_list(val))
        cfg.seeds.push_back(static_cast<uint64_t>(parse_long(key, c)));
    } else if (key == "out_dir") cfg.out_dir = val;
    else throw ConfigError(key, "unknown key");
  }
  return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file", "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

void RunConfig::validate() const {
  if (problem != "almost_bilinear" && problem != "simplex_game")
    throw ConfigError("problem", "unknown problem '" + problem + "'");
  if (problem == "almost_bilinear") {
    if (!(epsilon >= 0.0)) throw ConfigError("epsilon", "must be >= 0");
    if (dim < 1) throw ConfigError("dim", "must be >= 1");
  } else {
    if (game_n < 2) throw ConfigError("game_n", "must be >= 2");
    if (game_m < 2) throw ConfigError("game_m", "must be >= 2");
    if (!(lambda > 0.0)) throw ConfigError("lambda", "must be positive");
  }
  if (solvers.empty()) throw ConfigError("solvers", "at least one solver required");
  for (const auto& s : solvers) {
    if (!kFamilies.count(s.family))
      throw ConfigError("solvers", "unknown family '" + s.family + "'");
    if (!family_is_moving(s.family) && s.gamma_sign != 0)
      throw ConfigError("solvers", s.family + " does not take a gamma sign");
  }
  if (batch < 1) throw ConfigError("batch", "must be >= 1");
  if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma", "must be >= 0");
  if (!(noise_decay >= 0.0)) throw ConfigError("noise_decay", "must be >= 0");
  if (!k_bar_auto && !(k_bar_value >= 1.0)) throw ConfigError("k_bar", "must be >= 1");
  if (!paper_defaults) {
    if (!(alpha0 > 0.0)) throw ConfigError("alpha0", "must be positive");
    if (!(c0 > 0.0)) throw ConfigError("c0", "must be positive with explicit alpha0");
  }
  if (delta_rule == DeltaRule::Geometric &&
      !(geometric_ratio > 0.0 && geometric_ratio < 1.0))
    throw ConfigError("geometric_ratio", "must lie in (0,1)");
  if (!eta_half_alpha && !(eta_constant > 0.0))
    throw ConfigError("eta", "constant eta must be positive");
  if (max_iter < 1) throw ConfigError("max_iter", "must be >= 1");
  if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol", "must be >= 0");
  if (seeds.empty()) throw ConfigError("seeds", "at least one seed required");
  if (out_dir.empty()) throw ConfigError("out_dir", "must be set");
  if (!z0.empty()) {
    int want = problem == "almost_bilinear" ? 2 * dim : game_n + game_m;
    if (static_cast<int>(z0.size()) != want)
      throw ConfigError("z0", "expected " + std::to_string(want) + " coordinates");
  }
}

std::string RunConfig::to_text() const {
  std::ostringstream o;
  o << "problem = " << problem << "\n";
  if (problem == "almost_bilinear") {
    o << "epsilon = " << format_double(epsilon) << "\n";
    o << "dim = " << dim << "\n";
  } else {
    o << "game_n = " << game_n << "\n";
    o << "game_m = " << game_m << "\n";
    o << "game_seed = " << game_seed << "\n";
    o << "lambda = " << format_double(lambda) << "\n";
  }
  if (!z0.empty()) {
    o << "z0 = ";
    for (size_t i = 0; i < z0.size(); ++i) o << (i ? "," : "") << format_double(z0[i]);
    o << "\n";
  }
  o << "solvers = ";
  for (size_t i = 0; i < solvers.size(); ++i) {
    o << (i ? "," : "") << solvers[i].family;
    if (family_is_moving(solvers[i].family))
      o << ":" << (solvers[i].gamma_sign > 0 ? "+1" : solvers[i].gamma_sign < 0 ? "-1" : "0");
  }
  o << "\n";
  o << "oracle = " << OracleConfig::kind_name(oracle) << "\n";
  if (oracle == OracleConfig::Kind::Minibatch) o << "batch = " << batch << "\n";
  if (oracle == OracleConfig::Kind::AdditiveNoise) {
    o << "noise_sigma = " << format_double(noise_sigma) << "\n";
    o << "noise_decay = " << format_double(noise_decay) << "\n";
  }
  o << "k_bar = " << (k_bar_auto ? std::string("auto") : format_double(k_bar_value)) << "\n";
  o << "alpha0 = " << (paper_defaults ? std::string("paper_default") : format_double(alpha0))
    << "\n";
  if (!paper_defaults) o << "c0 = " << format_double(c0) << "\n";
  o << "delta_rule = "
    << (delta_rule == DeltaRule::InverseSquare ? "inv_square" : "geometric") << "\n";
  if (delta_rule == DeltaRule::Geometric)
    o << "geometric_ratio = " << format_double(geometric_ratio) << "\n";
  o << "eta = " << (eta_half_alpha ? std::string("half_alpha") : format_double(eta_constant))
    << "\n";
  o << "max_iter = " << max_iter << "\n";
  o << "grad_tol = " << format_double(grad_tol) << "\n";
  o << "seeds = ";
  for (size_t i = 0; i < seeds.size(); ++i) o << (i ? "," : "") << seeds[i];
  o << "\n";
  o << "out_dir = " << out_dir << "\n";
  return o.str();
}

std::unique_ptr<Problem> make_problem(const RunConfig& cfg) {
  if (cfg.problem == "almost_bilinear")
    return std::make_unique<AlmostBilinear>(cfg.epsilon, cfg.dim);
  return std::make_unique<SimplexGame>(cfg.game_n, cfg.game_m, cfg.game_seed, cfg.lambda);
}

Point default_start(const RunConfig& cfg, const Problem& problem) {
  if (!cfg.z0.empty())
    return Point(cfg.z0, problem.primal_dim(), problem.dual_dim());
  if (cfg.problem == "simplex_game")
    return static_cast<const SimplexGame&>(problem).uniform_strategies();
  Point p = Point::zeros(problem.primal_dim(), problem.dual_dim());
  for (double& v : p.coords) v = 1.0;
  return p;
}

double resolve_k_bar(const RunConfig& cfg, int N) {
  if (!cfg.k_bar_auto) return cfg.k_bar_value;
  switch (cfg.oracle) {
    case OracleConfig::Kind::Coordinate:
      // C_bar = N for the coordinate oracle, K_bar = N * C_bar
      return static_cast<double>(N) * static_cast<double>(N);
    case OracleConfig::Kind::Minibatch: {
      // mean of b without-replacement coordinate draws:
      // (1/N) sum ||G_theta||^2 <= (1 + (N-b)/b) ||G||^2
      double c_bar = 1.0 + static_cast<double>(N - cfg.batch) / cfg.batch;
      return static_cast<double>(N) * c_bar;
    }
    default:
      return 1.0;
  }
}

ScheduleConfig make_schedule(const RunConfig& cfg, const Problem& problem,
                             const SolverSpec& solver) {
  ScheduleConfig sc;
  sc.R = problem.lipschitz();
  sc.stochastic = family_is_stochastic(solver.family);
  sc.K_bar = sc.stochastic ? resolve_k_bar(cfg, problem.dim()) : 1.0;
  sc.delta_rule = cfg.delta_rule;
  sc.geometric_ratio = cfg.geometric_ratio;
  sc.gamma_sign = family_is_moving(solver.family) ? solver.gamma_sign : 0;
  if (cfg.paper_defaults) {
    auto [a0, c0] = default_stochastic_init(sc.R, sc.K_bar);
    sc.alpha0 = a0;
    sc.c0 = c0;
  } else {
    sc.alpha0 = cfg.alpha0;
    sc.c0 = cfg.c0;
  }
  return sc;
}

std::string cell_filename(const SolverSpec& solver, uint64_t seed) {
  return solver.tag() + "_seed" + std::to_string(seed) + ".csv";
}

namespace {

RunResult run_cell(const RunConfig& cfg, const Problem& problem, const SolverSpec& solver,
                   uint64_t seed) {
  ScheduleConfig sc = make_schedule(cfg, problem, solver);
  Point z0 = default_start(cfg, problem);
  StopRule stop{cfg.max_iter, cfg.grad_tol};

  if (solver.family == "eag_fixed" || solver.family == "eag_moving") {
    return run_eag(z0, problem, sc, stop);
  }
  if (solver.family == "eag_stochastic") {
    OracleConfig oc;
    oc.kind = cfg.oracle;
    oc.batch = cfg.batch;
    oc.noise_sigma = cfg.noise_sigma;
    oc.noise_decay = cfg.noise_decay;
    return run_eag_stochastic(z0, problem, oc, seed, sc, stop);
  }
  if (solver.family == "reflected") {
    double eta = cfg.eta_half_alpha ? sc.alpha0 / 2.0 : cfg.eta_constant;
    return run_reflected(z0, problem, eta, stop);
  }
  PopovConfig pc;
  pc.mode = solver.family == "popov_v1"   ? PopovMode::MovingV1
            : solver.family == "popov_v2" ? PopovMode::MovingV2
                                          : PopovMode::Fixed;
  pc.anchored = true;
  pc.eta_half_alpha = cfg.eta_half_alpha;
  pc.eta_constant = cfg.eta_constant;
  return run_popov(z0, problem, sc, pc, stop);
}

struct SummaryRow {
  std::string solver;
  uint64_t seed;
  double final_grad_sq;
  long iters_to_tol;  // -1 when the tolerance was not reached
  double slope;
  long violations;  // strict descent violations; -1 when not checkable
};

void write_summary(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "solver,seed,final_grad_sq,iters_to_tol,slope,violations\n";
  for (const auto& r : rows) {
    out << r.solver << ',' << r.seed << ',' << format_double(r.final_grad_sq) << ','
        << r.iters_to_tol << ',' << format_double(r.slope) << ','
        << (r.violations < 0 ? std::string() : std::to_string(r.violations)) << "\n";
  }
}

}  // namespace

ExperimentOutcome run_experiment(const RunConfig& cfg, int workers, std::ostream* log) {
  ExperimentOutcome out;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    out.exit_code = 2;
    out.message = e.what();
    return out;
  }
  fs::create_directories(cfg.out_dir);
  auto problem = make_problem(cfg);

  struct Cell {
    SolverSpec solver;
    uint64_t seed;
    RunResult result;
  };
  std::vector<Cell> cells;
  for (const auto& s : cfg.solvers)
    for (uint64_t seed : cfg.seeds) cells.push_back({s, seed, {}});

  auto work = [&](size_t idx) {
    cells[idx].result = run_cell(cfg, *problem, cells[idx].solver, cells[idx].seed);
  };

  if (workers <= 1) {
    for (size_t i = 0; i < cells.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::mutex m;
    size_t next = 0;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          size_t i;
          {
            std::lock_guard<std::mutex> lock(m);
            if (next >= cells.size()) return;
            i = next++;
          }
          work(i);
        }
      });
    for (auto& t : pool) t.join();
  }

  bool diverged = false;
  std::vector<SummaryRow> rows;
  for (auto& cell : cells) {
    cell.result.trace.seed = cell.seed;
    std::string fname = cell_filename(cell.solver, cell.seed);
    std::string path = (fs::path(cfg.out_dir) / fname).string();
    write_trace_csv(cell.result.trace, path);
    out.trace_files.push_back(path);

    SummaryRow row;
    row.solver = cell.solver.tag();
    row.seed = cell.seed;
    const auto& recs = cell.result.trace.records;
    row.final_grad_sq = recs.empty() ? 0.0 : recs.back().grad_norm_sq;
    row.iters_to_tol = cell.result.status == RunResult::Status::Converged
                           ? recs.back().k
                           : -1;
    long k_max = recs.empty() ? 0 : recs.back().k;
    if (k_max >= 10) {
      long lo = std::max<long>(1, k_max / 100);
      try {
        row.slope = fit_rate(cell.result.trace, lo, k_max).slope;
      } catch (const std::exception&) {
        row.slope = 0.0;
      }
    } else {
      row.slope = 0.0;
    }
    auto descent = check_descent(cell.result.trace);
    row.violations = descent.checkable ? static_cast<long>(descent.violations.size()) : -1;
    rows.push_back(row);

    if (cell.result.status == RunResult::Status::Diverged) {
      diverged = true;
      if (log)
        *log << "cell " << row.solver << " seed " << cell.seed
             << " diverged: " << cell.result.message << "\n";
    }
  }

  out.summary_file = (fs::path(cfg.out_dir) / "summary.csv").string();
  write_summary(out.summary_file, rows);
  std::ofstream cfg_copy(fs::path(cfg.out_dir) / "config.txt");
  cfg_copy << cfg.to_text();
  write_plot_stub(cfg);

  if (diverged) {
    out.exit_code = 3;
    out.message = "one or more cells diverged; partial traces kept";
  }
  return out;
}

int verify_experiment(const RunConfig& cfg, std::ostream& report) {
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    report << "invalid config: " << e.what() << "\n";
    return 2;
  }
  auto problem = make_problem(cfg);
  bool hard_fail = false;

  for (const auto& solver : cfg.solvers) {
    ScheduleConfig sc = make_schedule(cfg, *problem, solver);
    LimitDiagnostics limits = limit_diagnostics(sc);
    std::vector<Trace> traces;
    for (uint64_t seed : cfg.seeds) {
      std::string path = (fs::path(cfg.out_dir) / cell_filename(solver, seed)).string();
      try {
        traces.push_back(read_trace_csv(path));
      } catch (const std::exception& e) {
        report << "missing or corrupt trace: " << e.what() << "\n";
        return 4;
      }
    }

    report << "== " << solver.tag() << " ==\n";
    const bool deterministic_eag =
        solver.family == "eag_fixed" || solver.family == "eag_moving";
    const bool stochastic = family_is_stochastic(solver.family);

    if (deterministic_eag) {
      for (size_t i = 0; i < traces.size(); ++i) {
        auto rep = check_descent(traces[i]);
        if (!rep.checkable) {
          report << "  descent: not checkable (" << rep.reason << ")\n";
        } else if (rep.violations.empty()) {
          report << "  descent: pass (" << traces[i].size() << " records)\n";
        } else {
          report << "  descent: FAIL at " << rep.violations.size() << " steps (first k="
                 << rep.violations.front() << ")\n";
          hard_fail = true;
        }
      }
    } else if (stochastic) {
      auto rep = check_descent_stochastic(traces, problem->lipschitz());
      if (!rep.checkable) {
        report << "  stochastic descent: not checkable (" << rep.reason << ")\n";
      } else if (rep.violations.empty()) {
        report << "  stochastic descent: pass over " << traces.size() << " seeds\n";
      } else {
        report << "  stochastic descent: FAIL at " << rep.violations.size() << " steps\n";
        hard_fail = true;
      }
    } else {
      report << "  descent: skipped (no proven descent lemma for this family)\n";
    }

    // rate fit is informational
    for (const auto& t : traces) {
      long k_max = t.records.empty() ? 0 : t.records.back().k;
      if (k_max >= 10) {
        try {
          auto fit = fit_rate(t, std::max<long>(1, k_max / 100), k_max);
          report << "  rate slope [" << fit.k_lo << "," << fit.k_hi
                 << "]: " << fit.slope << (fit.truncated ? " (window truncated)" : "")
                 << "\n";
        } catch (const std::exception& e) {
          report << "  rate fit unavailable: " << e.what() << "\n";
        }
      }
      break;  // first seed is representative in the report
    }

    // theorem bound: gated on the certified precondition
    if (!limits.rate_theorem_precondition) {
      report << "  theorem bound: precondition unmet (c_inf_lb*alpha_inf_lb = "
             << limits.c_inf_lb * limits.alpha_inf_lb << " < 1), skipped\n";
    } else if (deterministic_eag || stochastic) {
      auto z_star = problem->solution();
      if (!z_star) {
        report << "  theorem bound: skipped (solution unknown)\n";
      } else {
        Point z0 = default_start(cfg, *problem);
        double z0d = dist_sq(z0, *z_star);
        for (const auto& t : traces) {
          BoundReport b;
          if (stochastic) {
            auto sums = accumulate_variance_sums(t, problem->lipschitz());
            b = check_theorem_bound(t, limits.alpha_inf_lb, sc.alpha0, sc.c0, sc.R, z0d,
                                    &sums);
          } else {
            b = check_theorem_bound(t, limits.alpha_inf_lb, sc.alpha0, sc.c0, sc.R, z0d);
          }
          if (b.violations.empty()) {
            report << "  theorem bound: pass (worst ratio " << b.worst_ratio << ")\n";
          } else {
            report << "  theorem bound: FAIL at " << b.violations.size() << " steps\n";
            hard_fail = true;
          }
        }
      }
    }

    // oracle variance condition (stochastic only, informational flag)
    if (stochastic) {
      const Trace& t = traces.front();
      bool have_vars = !t.records.empty() && t.records.front().var_zk.has_value();
      if (have_vars) {
        double C1 = 0.0;
        bool positive_tail = false;
        std::vector<double> lk, lv;
        for (const auto& r : t.records) {
          if (!r.var_zk) continue;
          double k4 = std::pow(static_cast<double>(r.k + 1), 4.0);
          C1 = std::max(C1, *r.var_zk * k4);
          if (r.k >= static_cast<long>(t.size() / 2) && *r.var_zk > 0.0) {
            lk.push_back(std::log(static_cast<double>(r.k + 1)));
            lv.push_back(std::log(*r.var_zk));
            positive_tail = true;
          }
        }
        double slope = 0.0;
        if (lk.size() >= 8) {
          double n = static_cast<double>(lk.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
          for (size_t j = 0; j < lk.size(); ++j) {
            sx += lk[j]; sy += lv[j]; sxx += lk[j] * lk[j]; sxy += lk[j] * lv[j];
          }
          slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        }
        bool violated = positive_tail && lk.size() >= 8 && slope > -3.5;
        report << "  variance condition: C1 = " << C1 << ", tail slope = " << slope
               << (violated ? " -> summability VIOLATED (expected for coordinate oracles)"
                            : " -> ok")
               << "\n";
      }
    }
  }
  return hard_fail ? 1 : 0;
}

RunConfig preset_config(const std::string& name, const std::string& out_dir,
                        uint64_t seed_base) {
  RunConfig cfg;
  if (name == "figure1") {
    // stochastic anchoring variants on the almost-bilinear toy
    cfg.problem = "almost_bilinear";
    cfg.epsilon = 0.01;
    cfg.dim = 1;
    cfg.solvers = {{"eag_stochastic", -1}, {"eag_stochastic", 0}, {"eag_stochastic", +1}};
    cfg.oracle = OracleConfig::Kind::AdditiveNoise;
    cfg.noise_sigma = 1.0;
    cfg.noise_decay = 4.0;
    cfg.max_iter = 1000;
    cfg.seeds.clear();
    for (uint64_t s = 0; s < 32; ++s) cfg.seeds.push_back(seed_base + s);
  } else if (name == "figure2") {
    // stochastic anchoring variants on the constrained quadratic game
    cfg.problem = "simplex_game";
    cfg.game_n = 48;
    cfg.game_m = 2;
    cfg.game_seed = 7;
    cfg.lambda = 0.01;
    cfg.solvers = {{"eag_stochastic", -1}, {"eag_stochastic", 0}, {"eag_stochastic", +1}};
    cfg.oracle = OracleConfig::Kind::AdditiveNoise;
    cfg.noise_sigma = 0.1;
    cfg.noise_decay = 4.0;
    cfg.k_bar_auto = false;
    cfg.k_bar_value = 1.0;  // the empirically-tuned setting
    cfg.max_iter = 1000;
    cfg.seeds.clear();
    for (uint64_t s = 0; s < 16; ++s) cfg.seeds.push_back(seed_base + s);
  } else if (name == "figure3") {
    // anchored Popov variants, fixed vs moving, steep coupling
    cfg.problem = "almost_bilinear";
    cfg.epsilon = 10.0;
    cfg.dim = 1;
    cfg.solvers = {{"popov_fixed", 0}, {"popov_v1", -1}, {"popov_v2", -1}};
    cfg.max_iter = 10000;
    cfg.seeds = {seed_base};
  } else {
    throw ConfigError("preset", "unknown preset '" + name + "' (figure1|figure2|figure3)");
  }
  cfg.out_dir = out_dir.empty() ? ("out/" + name) : out_dir;
  return cfg;
}

void write_plot_stub(const RunConfig& cfg) {
  std::ofstream py(fs::path(cfg.out_dir) / "plot.py");
  py << "#!/usr/bin/env python3\n"
        "\"\"\"Plot grad-norm-squared trajectories from the trace CSVs here.\"\"\"\n"
        "import csv, glob, os\n"
        "import matplotlib\n"
        "matplotlib.use('Agg')\n"
        "import matplotlib.pyplot as plt\n\n"
        "here = os.path.dirname(os.path.abspath(__file__))\n"
        "for path in sorted(glob.glob(os.path.join(here, '*_seed*.csv'))):\n"
        "    ks, gs = [], []\n"
        "    with open(path) as f:\n"
        "        for row in csv.DictReader(f):\n"
        "            ks.append(int(row['k'])); gs.append(float(row['grad_norm_sq']))\n"
        "    plt.loglog(ks[1:], gs[1:], label=os.path.basename(path)[:-4], alpha=0.6)\n"
        "plt.xlabel('k'); plt.ylabel('||G(z^k)||^2')\n"
        "if len(plt.gca().lines) <= 12: plt.legend(fontsize=6)\n"
        "plt.tight_layout(); plt.savefig(os.path.join(here, 'traces.png'), dpi=150)\n"
        "print('wrote traces.png')\n";
}

}  // namespace saddle
