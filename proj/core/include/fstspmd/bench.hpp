#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fstspmd/instance.hpp"
#include "fstspmd/oracle.hpp"
#include "fstspmd/timing.hpp"

namespace fstspmd {

// Relative difference of our values against reference values, in percent:
// ((ref_best - best)/ref_best * 100, (ref_avg - avg)/ref_avg * 100).
// Positive means better than the reference. Throws std::invalid_argument on a
// nonpositive reference.
std::pair<double, double> delta_metrics(double ref_best, double ref_avg, double best, double avg);

// (z_tsp - z)/z_tsp * 100. Negative values are returned as is.
double time_savings(double z_tsp, double z);

struct EnduranceSetting {
  enum class Kind { finite, unbounded, heuristic };
  Kind kind = Kind::unbounded;
  double value = 0.0;

  static EnduranceSetting finite(double v) { return {Kind::finite, v}; }
  static EnduranceSetting unbounded() { return {Kind::unbounded, 0.0}; }
  static EnduranceSetting heuristic() { return {Kind::heuristic, 0.0}; }

  // Resolved endurance for an instance; nullopt when unbounded.
  std::optional<double> resolve(const Instance& inst) const;
  std::string str() const;  // "25", "inf", "auto"
};

// Parses "25", "inf" or "auto".
EnduranceSetting parse_endurance(const std::string& text);

struct ScenarioGrid {
  std::vector<Instance> instances;
  std::vector<std::optional<int>> drops{std::optional<int>{1}};  // nullopt: D = n
  std::vector<std::optional<double>> speed_ratios{std::nullopt};  // nullopt: drone matrix as given
  std::vector<EnduranceSetting> endurances{EnduranceSetting::unbounded()};
  int runs = 1;
  std::uint64_t seed0 = 1;
  SolverParams base;  // everything except D, E, seed

  // Throws std::invalid_argument when a set is empty or runs < 1.
  void validate() const;
  std::size_t cells() const;
};

// key=value lines: instances=, drops=, ratios=, endurances=, runs=, seed0=,
// time_limit_s=, stop_no_improve=, launch=, retrieve=. Lists are
// comma-separated; instance paths are relative to `base_dir`.
ScenarioGrid parse_grid_config(std::istream& in, const std::string& base_dir);
ScenarioGrid load_grid_config(const std::string& path);

struct ResultRow {
  std::string instance;
  std::optional<int> drops;
  std::optional<double> speed_ratio;
  std::string endurance;  // EnduranceSetting::str()
  std::uint64_t seed = 0;
  double objective = 0.0;
  double runtime_ms = 0.0;
  double tsp_baseline = 0.0;
  double savings_pct = 0.0;
  std::string baseline_mode;  // "exact_dp" or "heuristic"
  std::string error;          // nonempty for a failed run
};

// Cells in order instance, D, ratio, E, run; rows come back in that order
// whatever the worker count.
std::vector<ResultRow> run_scenario_grid(const ScenarioGrid& grid, int workers = 1);

// Header plus one line per row. Numbers carry 6 decimals; runtime_ms is left
// empty unless `with_timing`, so that reruns produce identical bytes.
void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool with_timing);
std::vector<ResultRow> read_results_csv(std::istream& in);

// n customers and a depot uniform on [0, side]^2, euclidean, truck speed 1,
// drone speed `speed_ratio`, every customer eligible.
Instance make_uniform_instance(int n, std::uint64_t seed, double speed_ratio = 2.0,
                               double side = 100.0);

// Baseline used by the harness: Held-Karp up to its size limit, heuristic beyond.
TspMode baseline_mode_for(int n);

}  // namespace fstspmd
