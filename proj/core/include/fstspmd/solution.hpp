#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fstspmd/instance.hpp"
#include "fstspmd/timing.hpp"
#include "fstspmd/tour.hpp"

namespace fstspmd {

// One synchronized operation between a launch node and a recovery node, in
// absolute node ids. An empty drone list means the drone rides on the truck.
// Plans produced by the split carry the partition node; plans from the
// unrestricted oracle may assign the drone an arbitrary subset.
struct PlanTuple {
  int launch = 0;
  int recovery = 0;
  std::vector<int> truck_customers;  // visited strictly between launch and recovery
  std::vector<int> drone_customers;
  int partition_node = -1;  // -1 when the tuple is not in partition form

  bool flies() const { return !drone_customers.empty(); }
  bool operator==(const PlanTuple&) const = default;
};

struct TupleTiming {
  double truck_time = 0.0;  // truck legs plus truck service, no launch/retrieval
  double drone_time = 0.0;  // drone legs plus drone service; 0 when carried
  double wait_time = 0.0;   // idle time of whichever vehicle arrives first
  double flight_time = 0.0; // charged against endurance
  double coordinated = 0.0; // contribution to the completion time
};

struct Evaluation {
  double objective = 0.0;
  std::vector<TupleTiming> timeline;
  std::vector<std::string> violations;
  std::vector<std::string> notes;

  bool feasible() const { return violations.empty(); }
};

class PlanStructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Recomputes every tuple's timing from the matrices and checks drops,
// endurance, eligibility and coverage. Throws PlanStructureError if the
// launch/recovery chain does not run from node 0 to node n+1.
Evaluation evaluate_solution(std::span<const PlanTuple> plan, const Instance& inst,
                             const TimingModel& tm);

struct Solution {
  Tour tour;
  std::vector<PlanTuple> tuples;
  Evaluation evaluation;

  double objective() const { return evaluation.objective; }
};

// JSON document with the objective, tour and one record per tuple
// (launch_node, recovery_node, partition_node, truck_route, drone_route,
// truck_time, drone_time, wait_time). Output is deterministic.
std::string solution_to_json(const Solution& sol, const Instance& inst);

// Reads the tour and tuples back and re-evaluates them.
Solution solution_from_json(const std::string& text, const Instance& inst, const TimingModel& tm);

}  // namespace fstspmd
