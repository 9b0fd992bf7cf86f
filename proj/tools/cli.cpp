#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "fstspmd/bench.hpp"
#include "fstspmd/instance.hpp"
#include "fstspmd/mdspp.hpp"
#include "fstspmd/oracle.hpp"
#include "fstspmd/search.hpp"
#include "fstspmd/solution.hpp"
#include "svg.hpp"

namespace fstspmd {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failure of the requested computation (exit 1).
class RunFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string instance;
  std::string drops = "2";
  std::string endurance = "inf";
  std::optional<double> speed_ratio;
  double launch = 0.0;
  double retrieve = 0.0;
  double svc_truck = 0.0;
  double svc_drone = 0.0;
  std::optional<std::uint64_t> seed;
  std::optional<double> time_limit_s;
  int stop_no_improve = 200;
  int eta = 10;
  double p_mut = 0.1;
  bool sequential = false;
  std::string tour;
  std::string eligibility;
  std::string out;
  std::string log;
  std::string svg;
  bool log_timing = false;
  // oracle
  bool exact = false;
  bool unrestricted = false;
  // bench
  std::string config;
  int workers = 1;
  // plot
  std::string solution;
};

void add_instance_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--instance", o.instance, "instance file (canonical or coords-legacy)")->required();
  cmd->add_option("--speed-ratio", o.speed_ratio,
                  "rebuild the drone matrix as euclidean / (ratio * truck speed)");
  cmd->add_option("--eligibility", o.eligibility,
                  "file with one 0/1 flag per customer 1..n (1 = drone-eligible)");
}

void add_param_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--drops", o.drops, "max drops per sortie, N or inf")->capture_default_str();
  cmd->add_option("--endurance", o.endurance, "max flight time, X, auto or inf")->capture_default_str();
  cmd->add_option("--launch", o.launch, "launch time")->capture_default_str();
  cmd->add_option("--retrieve", o.retrieve, "retrieval time")->capture_default_str();
  cmd->add_option("--svc-truck", o.svc_truck, "truck service time per customer")->capture_default_str();
  cmd->add_option("--svc-drone", o.svc_drone, "drone service time per customer")->capture_default_str();
}

void add_search_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "PRNG seed (fallback: FSTSPMD_SEED, then 1)");
  cmd->add_option("--time-limit-s", o.time_limit_s, "wall-clock budget in seconds");
  cmd->add_option("--stop-no-improve", o.stop_no_improve,
                  "stop after this many iterations without a new best")
      ->capture_default_str();
  cmd->add_option("--eta", o.eta, "small perturbations before a big one")->capture_default_str();
  cmd->add_option("--p-mut", o.p_mut, "mutation probability of the big perturbation")
      ->capture_default_str();
  cmd->add_flag("--sequential-neighborhoods", o.sequential,
                "build 2-p and 2-opt from the best tour found earlier in the phase");
}

bool file_exists(const std::string& path) { return std::filesystem::is_regular_file(path); }

std::string read_file(const std::string& path) {
  if (!file_exists(path)) throw UsageError("file not found: " + path);
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw RunFailure("cannot write " + path);
}

Instance load(const Options& o) {
  if (!file_exists(o.instance)) throw UsageError("instance file not found: " + o.instance);
  Instance inst;
  try {
    inst = load_instance(o.instance);
  } catch (const std::exception& e) {
    throw RunFailure(o.instance + ": " + e.what());
  }
  if (o.speed_ratio) {
    if (!(*o.speed_ratio > 0.0)) throw UsageError("--speed-ratio must be positive");
    try {
      inst = with_speed_ratio(inst, *o.speed_ratio);
    } catch (const std::exception& e) {
      throw RunFailure(e.what());
    }
  }
  if (!o.eligibility.empty()) {
    std::istringstream in(read_file(o.eligibility));
    std::vector<bool> mask{true};
    std::string tok;
    while (in >> tok) {
      if (tok != "0" && tok != "1") throw UsageError("eligibility file: expected 0 or 1, got '" + tok + "'");
      mask.push_back(tok == "1");
    }
    if (static_cast<int>(mask.size()) != inst.n + 1) {
      throw UsageError("eligibility file: expected " + std::to_string(inst.n) + " flags, got " +
                       std::to_string(mask.size() - 1));
    }
    inst.eligible = std::move(mask);
  }
  if (o.endurance == "auto") inst.meta["endurance_pairs"] = std::string(kEndurancePairConvention);
  return inst;
}

std::optional<int> parse_drops(const std::string& s) {
  if (s == "inf") return std::nullopt;
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 1) throw UsageError("--drops expects a positive integer or inf, got '" + s + "'");
  return v;
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("FSTSPMD_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("FSTSPMD_SEED is not an unsigned integer: '") + env + "'");
  }
  return 1;
}

SolverParams make_params(const Options& o, const Instance& inst) {
  SolverParams p;
  p.max_drops = parse_drops(o.drops);
  try {
    p.endurance = parse_endurance(o.endurance).resolve(inst);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--endurance: ") + e.what());
  }
  p.launch_time = o.launch;
  p.retrieve_time = o.retrieve;
  p.truck_service = o.svc_truck;
  p.drone_service = o.svc_drone;
  p.eta = o.eta;
  p.mutation_prob = o.p_mut;
  p.sequential_neighborhoods = o.sequential;
  p.seed = resolve_seed(o);
  p.stop_no_improve = o.stop_no_improve;
  p.time_limit_s = o.time_limit_s;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return p;
}

// Accepts either the n customers or the full giant tour with both depot copies.
Tour read_tour(const std::string& path, int n) {
  std::istringstream in(read_file(path));
  std::vector<int> ids;
  long long v = 0;
  while (in >> v) ids.push_back(static_cast<int>(v));
  if (!in.eof()) throw UsageError("tour file: non-integer token in " + path);
  if (static_cast<int>(ids.size()) == n + 2 && ids.front() == 0 && ids.back() == n + 1) {
    ids = std::vector<int>(ids.begin() + 1, ids.end() - 1);
  }
  try {
    return make_tour(ids, n);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("tour file: ") + e.what());
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void emit_solution_artifacts(const Options& o, const Solution& sol, const Instance& inst) {
  if (!o.out.empty()) write_file(o.out, solution_to_json(sol, inst));
  if (!o.svg.empty()) {
    try {
      write_file(o.svg, render_route_svg(sol, inst));
    } catch (const std::invalid_argument& e) {
      throw RunFailure(e.what());
    }
  }
}

int report_feasibility(const Solution& sol, std::ostream& err) {
  if (sol.evaluation.feasible()) return 0;
  for (const auto& v : sol.evaluation.violations) err << "violation: " << v << '\n';
  return 1;
}

int run_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const Instance inst = load(o);
  SolverParams params = make_params(o, inst);
  if (!o.tour.empty()) {
    const Tour t = read_tour(o.tour, inst.n);
    params.initial_customers = std::vector<int>(t.order.begin() + 1, t.order.end() - 1);
  }
  const SolveResult r = solve(inst, params);
  const TimingModel tm = make_timing_model(inst, params);
  SplitWorkspace ws;
  const double resplit = split_completion(inst, r.best.tour, tm, ws);
  const double z = r.best.objective();
  if (std::fabs(resplit - z) > 1e-9 * std::max(1.0, std::fabs(z))) {
    err << "self-check failed: reported objective " << fmt(z) << " but split of the tour gives "
        << fmt(resplit) << '\n';
    return 1;
  }
  emit_solution_artifacts(o, r.best, inst);
  if (!o.log.empty()) {
    std::ostringstream log;
    write_run_log(log, r.log, o.log_timing);
    write_file(o.log, log.str());
  }
  out << "objective " << fmt(z) << '\n'
      << "initial_objective " << fmt(r.initial_objective) << '\n'
      << "iterations " << r.iterations << '\n'
      << "stop " << r.stop_reason << '\n'
      << "rng " << Rng::kAlgorithm << " seed " << params.seed << '\n';
  return report_feasibility(r.best, err);
}

int run_split(const Options& o, std::ostream& out, std::ostream& err) {
  const Instance inst = load(o);
  const SolverParams params = make_params(o, inst);
  const TimingModel tm = make_timing_model(inst, params);
  const Tour tour = o.tour.empty() ? identity_tour(inst.n) : read_tour(o.tour, inst.n);
  const Solution sol = solve_tour(inst, tour, tm);
  emit_solution_artifacts(o, sol, inst);
  out << "objective " << fmt(sol.objective()) << '\n' << "tuples " << sol.tuples.size() << '\n';
  return report_feasibility(sol, err);
}

int run_oracle(const Options& o, std::ostream& out, std::ostream&) {
  const Instance inst = load(o);
  const SolverParams params = make_params(o, inst);
  const TimingModel tm = make_timing_model(inst, params);
  OracleResult r;
  try {
    if (o.exact) {
      r = exact_solve_tiny(inst, tm);
    } else {
      const Tour tour = o.tour.empty() ? identity_tour(inst.n) : read_tour(o.tour, inst.n);
      r = enumerate_split_oracle(inst, tour, tm, !o.unrestricted);
    }
  } catch (const OracleRefusal& e) {
    throw RunFailure(e.what());
  }
  out << "objective " << fmt(r.completion) << '\n' << "explored " << r.explored << '\n';
  out << "tour";
  for (int v : r.tour.order) out << ' ' << v;
  out << '\n';
  if (!o.out.empty()) {
    Solution sol;
    sol.tour = r.tour;
    sol.tuples = r.plan;
    sol.evaluation = evaluate_solution(sol.tuples, inst, tm);
    write_file(o.out, solution_to_json(sol, inst));
  }
  return 0;
}

int run_bench(const Options& o, std::ostream& out, std::ostream& err) {
  if (!file_exists(o.config)) throw UsageError("grid config not found: " + o.config);
  if (o.workers < 1) throw UsageError("--workers must be >= 1");
  ScenarioGrid grid;
  try {
    grid = load_grid_config(o.config);
  } catch (const std::exception& e) {
    throw RunFailure(e.what());
  }
  const auto rows = run_scenario_grid(grid, o.workers);
  std::ostringstream csv;
  write_results_csv(csv, rows, o.log_timing);
  if (o.out.empty()) out << csv.str();
  else write_file(o.out, csv.str());
  int failed = 0;
  for (const auto& r : rows) {
    if (!r.error.empty()) {
      ++failed;
      err << "run failed: " << r.instance << " seed " << r.seed << ": " << r.error << '\n';
    }
  }
  return failed ? 1 : 0;
}

int run_validate(const Options& o, std::ostream& out, std::ostream& err) {
  if (!file_exists(o.instance)) throw UsageError("instance file not found: " + o.instance);
  Instance inst;
  try {
    inst = load_instance(o.instance);
  } catch (const std::exception& e) {
    err << "violation: " << e.what() << '\n';
    return 1;
  }
  const ValidationReport report = validate_instance(inst);
  if (report.ok()) {
    out << "ok " << inst.name << " n=" << inst.n << '\n';
    return 0;
  }
  for (const auto& v : report.violations) err << "violation: " << v << '\n';
  return 1;
}

int run_plot(const Options& o, std::ostream& out, std::ostream&) {
  const Instance inst = load(o);
  const SolverParams params = make_params(o, inst);
  const TimingModel tm = make_timing_model(inst, params);
  Solution sol;
  try {
    sol = solution_from_json(read_file(o.solution), inst, tm);
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw RunFailure(e.what());
  }
  try {
    write_file(o.svg, render_route_svg(sol, inst));
  } catch (const std::invalid_argument& e) {
    throw RunFailure(e.what());
  }
  out << "wrote " << o.svg << '\n';
  return 0;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Truck and multi-drop drone routing solver"};
  app.name("fstspmd");
  app.require_subcommand(1);

  auto* solve_cmd = app.add_subcommand("solve", "local search over giant tours");
  add_instance_options(solve_cmd, o);
  add_param_options(solve_cmd, o);
  add_search_options(solve_cmd, o);
  solve_cmd->add_option("--tour", o.tour, "initial tour file");
  solve_cmd->add_option("--out", o.out, "solution JSON");
  solve_cmd->add_option("--log", o.log, "run log CSV");
  solve_cmd->add_option("--svg", o.svg, "route plot");
  solve_cmd->add_flag("--log-timing", o.log_timing, "fill elapsed_ms in the run log");

  auto* split_cmd = app.add_subcommand("split", "optimal truck/drone split of one tour");
  add_instance_options(split_cmd, o);
  add_param_options(split_cmd, o);
  split_cmd->add_option("--tour", o.tour, "tour file (default: identity order)");
  split_cmd->add_option("--out", o.out, "solution JSON");
  split_cmd->add_option("--svg", o.svg, "route plot");

  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force references for small instances");
  add_instance_options(oracle_cmd, o);
  add_param_options(oracle_cmd, o);
  oracle_cmd->add_option("--tour", o.tour, "tour file (default: identity order)");
  oracle_cmd->add_option("--out", o.out, "solution JSON");
  oracle_cmd->add_flag("--exact", o.exact, "optimum over all tours (n <= 8)");
  oracle_cmd->add_flag("--unrestricted", o.unrestricted, "any drone subset, not only prefixes");

  auto* bench_cmd = app.add_subcommand("bench", "run a scenario grid");
  bench_cmd->add_option("--config", o.config, "grid config (key=value lines)")->required();
  bench_cmd->add_option("--out", o.out, "results CSV (default: stdout)");
  bench_cmd->add_option("--workers", o.workers, "parallel runs")->capture_default_str();
  bench_cmd->add_flag("--log-timing", o.log_timing, "fill runtime_ms in the CSV");

  auto* validate_cmd = app.add_subcommand("validate", "check an instance file");
  validate_cmd->add_option("--instance", o.instance, "instance file")->required();

  auto* plot_cmd = app.add_subcommand("plot", "render a solution file as SVG");
  add_instance_options(plot_cmd, o);
  add_param_options(plot_cmd, o);
  plot_cmd->add_option("--solution", o.solution, "solution JSON")->required();
  plot_cmd->add_option("--svg", o.svg, "output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(o, out, err);
    if (split_cmd->parsed()) return run_split(o, out, err);
    if (oracle_cmd->parsed()) return run_oracle(o, out, err);
    if (bench_cmd->parsed()) return run_bench(o, out, err);
    if (validate_cmd->parsed()) return run_validate(o, out, err);
    if (plot_cmd->parsed()) return run_plot(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace fstspmd
