#pragma once

#include <functional>
#include <vector>

#include "fstspmd/instance.hpp"
#include "fstspmd/solution.hpp"
#include "fstspmd/timing.hpp"
#include "fstspmd/tour.hpp"

namespace fstspmd {

// Coordinated time of the operation that launches at tour position i, lets the
// drone serve positions i+1..k and recovers it at position j while the truck
// serves k+1..j-1 (k == i: the drone rides along).
//
// With zero launch/retrieval/service times the drone and truck elapsed times
// are the plain leg sums and coordinated = max of the two. Otherwise
//   drone core = drone legs + drone service,
//   truck core = truck legs + truck service at positions k+1..j,
//   flight     = max(drone core, truck core),
//   coordinated = launch + flight + retrieval.
// The endurance limit applies to `flight`.
struct ArcTime {
  double coordinated = 0.0;
  double truck = 0.0;
  double drone = 0.0;
  double flight = 0.0;
  bool eligible = true;  // false: a drone customer is not drone-eligible

  double cost() const { return eligible ? coordinated : kInfinity; }
};

// Throws std::invalid_argument unless 0 <= i <= k < j <= n+1 and k <= i + D.
ArcTime arc_time(const Instance& inst, const Tour& tour, int i, int j, int k,
                 const TimingModel& tm);

struct SplitArc {
  int from = -1;       // predecessor position
  int partition = -1;  // partition position; == from for truck-only arcs
};

struct PositionTuple {
  int from = 0;
  int to = 0;
  int partition = 0;

  bool flies() const { return partition > from; }
};

struct SplitResult {
  std::vector<double> labels;     // completion time at each tour position
  std::vector<SplitArc> pred;
  std::vector<PositionTuple> tuples;
  double completion = kInfinity;
};

// Reusable scratch buffers for repeated splits on same-size tours.
class SplitWorkspace {
 public:
  std::vector<double> labels;
  std::vector<SplitArc> pred;
  std::vector<double> truck_leg;
  std::vector<double> drone_leg;

  void resize(std::size_t positions);
};

// Optimal partition-node plan for the tour, O(n^2 D) label-correcting pass
// over the tour's forward arcs.
SplitResult split(const Instance& inst, const Tour& tour, const TimingModel& tm);

// Called on every successful relaxation with (position, old label, new label).
using LabelObserver = std::function<void(int, double, double)>;
SplitResult split(const Instance& inst, const Tour& tour, const TimingModel& tm,
                  const LabelObserver& observer);

// Completion time only. Returns kInfinity as soon as every remaining label is
// already >= cutoff, so callers that only need "is it below cutoff" can stop
// early. Exact whenever the result is below cutoff.
double split_completion(const Instance& inst, const Tour& tour, const TimingModel& tm,
                        SplitWorkspace& ws, double cutoff = kInfinity);

std::vector<PlanTuple> plan_from_split(const Tour& tour, const SplitResult& result);

// Splits the tour and evaluates the resulting plan.
Solution solve_tour(const Instance& inst, const Tour& tour, const TimingModel& tm);

}  // namespace fstspmd
