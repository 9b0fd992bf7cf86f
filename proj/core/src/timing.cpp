#include "fstspmd/timing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fstspmd {

void SolverParams::validate() const {
  if (max_drops && *max_drops < 1) throw std::invalid_argument("max drops must be >= 1");
  if (endurance && !(*endurance > 0.0)) throw std::invalid_argument("endurance must be > 0");
  if (launch_time < 0 || retrieve_time < 0 || truck_service < 0 || drone_service < 0) {
    throw std::invalid_argument("launch/retrieve/service times must be >= 0");
  }
  if (eta < 1) throw std::invalid_argument("eta must be >= 1");
  if (!(mutation_prob > 0.0 && mutation_prob < 1.0)) {
    throw std::invalid_argument("mutation probability must lie in (0, 1)");
  }
  if (stop_no_improve < 1) throw std::invalid_argument("stop-no-improve must be >= 1");
  if (time_limit_s && !(*time_limit_s > 0.0)) {
    throw std::invalid_argument("time limit must be > 0");
  }
}

TimingModel make_timing_model(const Instance& inst, const SolverParams& params) {
  params.validate();
  TimingModel tm;
  tm.max_drops = params.max_drops ? std::min(*params.max_drops, inst.n) : inst.n;
  tm.endurance = params.endurance.value_or(kInfinity);
  tm.launch_time = params.launch_time;
  tm.retrieve_time = params.retrieve_time;
  tm.truck_service = params.truck_service;
  tm.drone_service = params.drone_service;
  tm.eligible.assign(static_cast<std::size_t>(inst.n) + 2, 1);
  for (int v = 1; v <= inst.n; ++v) tm.eligible[static_cast<std::size_t>(v)] = inst.is_eligible(v);
  return tm;
}

}  // namespace fstspmd
