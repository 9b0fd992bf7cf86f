#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fstspmd/instance.hpp"
#include "fstspmd/solution.hpp"
#include "fstspmd/timing.hpp"
#include "fstspmd/tour.hpp"

namespace fstspmd {

// Brute-force references. None of these share code with the split; they
// recompute every operation's timing from the matrices.

class OracleRefusal : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr int kSplitOracleMaxCustomers = 14;
inline constexpr int kExactTinyMaxCustomers = 8;
inline constexpr int kHeldKarpMaxCustomers = 16;

struct OracleResult {
  double completion = kInfinity;
  std::vector<PlanTuple> plan;
  std::uint64_t explored = 0;   // candidate operations examined
  std::vector<double> labels;   // shortest-path value at each tour position
  Tour tour;
};

// Shortest path over all forward arcs of the tour. With `restricted` the drone
// may only take a prefix i+1..k of each subsequence (partition nodes);
// otherwise any subset of the interior customers, visited in tour order.
// Candidates with more than D drone customers are not enumerated; endurance and
// eligibility are filtered after counting.
OracleResult enumerate_split_oracle(const Instance& inst, const Tour& tour, const TimingModel& tm,
                                    bool restricted);

// True optimum over every tour and every truck/drone assignment. n <= 8.
OracleResult exact_solve_tiny(const Instance& inst, const TimingModel& tm);

enum class TspMode { exact_dp, heuristic };

struct TspResult {
  Tour tour;
  double duration = 0.0;
};

// Truck-only tour. exact_dp is Held-Karp (n <= 16); heuristic is nearest
// neighbour + 2-opt + or-opt from several starts. Duration includes the
// per-customer truck service time.
TspResult tsp_baseline(const Instance& inst, TspMode mode, double truck_service = 0.0);

}  // namespace fstspmd
