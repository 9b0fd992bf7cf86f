#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "fstspmd/instance.hpp"

namespace fstspmd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Absolute tolerance for comparing times.
inline constexpr double kTimeTolerance = 1e-9;

struct SolverParams {
  std::optional<int> max_drops;     // nullopt: unbounded (D = n)
  std::optional<double> endurance;  // nullopt: unbounded
  double launch_time = 0.0;
  double retrieve_time = 0.0;
  double truck_service = 0.0;  // per customer served by the truck
  double drone_service = 0.0;  // per customer served by the drone
  int eta = 10;                // unproductive small perturbations before a big one
  double mutation_prob = 0.1;
  std::uint64_t seed = 1;
  int stop_no_improve = 200;
  std::optional<double> time_limit_s;
  std::optional<std::vector<int>> initial_customers;  // external initial tour
  // false: all three neighbourhoods come from the tour the phase started on.
  // true: 2-p and 2-opt start from the best tour found so far in the phase.
  bool sequential_neighborhoods = false;

  // Throws std::invalid_argument on the first violated invariant.
  void validate() const;
};

// Per-run projection of SolverParams onto an instance.
struct TimingModel {
  int max_drops = 1;
  double endurance = kInfinity;
  double launch_time = 0.0;
  double retrieve_time = 0.0;
  double truck_service = 0.0;
  double drone_service = 0.0;
  std::vector<char> eligible;  // indexed by node id 0..n+1

  bool eligible_node(int node) const { return eligible[static_cast<std::size_t>(node)] != 0; }
  bool within_endurance(double flight) const { return flight <= endurance + kTimeTolerance; }
  double svc_truck(int node, int n) const { return node >= 1 && node <= n ? truck_service : 0.0; }
};

TimingModel make_timing_model(const Instance& inst, const SolverParams& params);

}  // namespace fstspmd
