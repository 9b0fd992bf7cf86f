#include "fstspmd/solution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "json.hpp"

namespace fstspmd {

namespace {

double route_time(const TimeMatrix& m, int from, std::span<const int> via, int to) {
  double total = 0.0;
  int at = from;
  for (int v : via) {
    total += m(at, v);
    at = v;
  }
  return total + m(at, to);
}

std::string tuple_label(std::size_t idx, const PlanTuple& t) {
  return "tuple " + std::to_string(idx) + " (" + std::to_string(t.launch) + "->" +
         std::to_string(t.recovery) + ")";
}

}  // namespace

Evaluation evaluate_solution(std::span<const PlanTuple> plan, const Instance& inst,
                             const TimingModel& tm) {
  const int n = inst.n;
  if (plan.empty()) throw PlanStructureError("empty plan: no tuple leaves node 0");
  int expected = 0;
  for (std::size_t t = 0; t < plan.size(); ++t) {
    if (plan[t].launch != expected) {
      throw PlanStructureError("tuple chain broken at tuple " + std::to_string(t) +
                               ": launch node " + std::to_string(plan[t].launch) +
                               ", expected " + std::to_string(expected));
    }
    expected = plan[t].recovery;
    if (expected < 1 || expected > n + 1) {
      throw PlanStructureError("tuple " + std::to_string(t) + " recovers at invalid node " +
                               std::to_string(expected));
    }
    if (expected == n + 1 && t + 1 != plan.size()) {
      throw PlanStructureError("tuple chain broken at tuple " + std::to_string(t + 1) +
                               ": plan continues after returning to the depot");
    }
  }
  if (expected != n + 1) {
    throw PlanStructureError("tuple chain broken after tuple " + std::to_string(plan.size() - 1) +
                             ": last recovery is node " + std::to_string(expected) +
                             ", not the depot");
  }

  Evaluation ev;
  std::vector<int> served(static_cast<std::size_t>(n) + 2, 0);
  auto serve = [&](int v) {
    if (v >= 1 && v <= n) ++served[static_cast<std::size_t>(v)];
    else ev.violations.push_back("node " + std::to_string(v) + " is not a customer");
  };

  for (std::size_t t = 0; t < plan.size(); ++t) {
    const PlanTuple& p = plan[t];
    for (int v : p.truck_customers) serve(v);
    for (int v : p.drone_customers) serve(v);
    if (p.recovery <= n) serve(p.recovery);

    TupleTiming timing;
    const auto truck_served =
        static_cast<double>(p.truck_customers.size() + (p.recovery <= n ? 1 : 0));
    timing.truck_time = route_time(inst.truck_time, p.launch, p.truck_customers, p.recovery) +
                        tm.truck_service * truck_served;
    if (!p.flies()) {
      timing.coordinated = timing.truck_time;
    } else {
      timing.drone_time = route_time(inst.drone_time, p.launch, p.drone_customers, p.recovery) +
                          tm.drone_service * static_cast<double>(p.drone_customers.size());
      timing.flight_time = std::max(timing.truck_time, timing.drone_time);
      timing.wait_time = std::abs(timing.truck_time - timing.drone_time);
      timing.coordinated = tm.launch_time + timing.flight_time + tm.retrieve_time;

      if (static_cast<int>(p.drone_customers.size()) > tm.max_drops) {
        ev.violations.push_back(tuple_label(t, p) + ": drops exceeded (" +
                                std::to_string(p.drone_customers.size()) + " > " +
                                std::to_string(tm.max_drops) + ")");
      }
      if (!tm.within_endurance(timing.flight_time)) {
        ev.violations.push_back(tuple_label(t, p) + ": endurance exceeded");
      }
      for (int v : p.drone_customers) {
        if (v >= 1 && v <= n && !tm.eligible_node(v)) {
          ev.violations.push_back(tuple_label(t, p) + ": ineligible drone customer " +
                                  std::to_string(v));
        }
      }
      if (p.launch == 0 && p.recovery == n + 1 && p.truck_customers.empty()) {
        ev.notes.push_back(tuple_label(t, p) + ": truck idle at depot");
      }
    }
    ev.objective += timing.coordinated;
    ev.timeline.push_back(timing);
  }

  for (int v = 1; v <= n; ++v) {
    int c = served[static_cast<std::size_t>(v)];
    if (c == 0) ev.violations.push_back("coverage: customer " + std::to_string(v) + " not served");
    if (c > 1) {
      ev.violations.push_back("coverage: customer " + std::to_string(v) + " served " +
                              std::to_string(c) + " times");
    }
  }
  return ev;
}

std::string solution_to_json(const Solution& sol, const Instance& inst) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["instance"] = inst.name;
  doc["n"] = inst.n;
  doc["objective"] = sol.objective();
  doc["feasible"] = sol.evaluation.feasible();
  doc["violations"] = sol.evaluation.violations;
  doc["notes"] = sol.evaluation.notes;
  if (!inst.meta.empty()) doc["meta"] = inst.meta;
  doc["tour"] = sol.tour.order;
  ordered_json tuples = ordered_json::array();
  for (std::size_t t = 0; t < sol.tuples.size(); ++t) {
    const PlanTuple& p = sol.tuples[t];
    const TupleTiming& timing = sol.evaluation.timeline[t];
    std::vector<int> truck_route{p.launch};
    truck_route.insert(truck_route.end(), p.truck_customers.begin(), p.truck_customers.end());
    truck_route.push_back(p.recovery);
    std::vector<int> drone_route;
    if (p.flies()) {
      drone_route.push_back(p.launch);
      drone_route.insert(drone_route.end(), p.drone_customers.begin(), p.drone_customers.end());
      drone_route.push_back(p.recovery);
    }
    ordered_json rec;
    rec["launch_node"] = p.launch;
    rec["recovery_node"] = p.recovery;
    rec["partition_node"] = p.partition_node;
    rec["truck_route"] = truck_route;
    rec["drone_route"] = drone_route;
    rec["truck_time"] = timing.truck_time;
    rec["drone_time"] = timing.drone_time;
    rec["wait_time"] = timing.wait_time;
    tuples.push_back(std::move(rec));
  }
  doc["tuples"] = std::move(tuples);
  return doc.dump(2) + "\n";
}

Solution solution_from_json(const std::string& text, const Instance& inst, const TimingModel& tm) {
  const auto doc = nlohmann::json::parse(text);
  Solution sol;
  sol.tour.order = doc.at("tour").get<std::vector<int>>();
  for (const auto& rec : doc.at("tuples")) {
    PlanTuple p;
    p.launch = rec.at("launch_node").get<int>();
    p.recovery = rec.at("recovery_node").get<int>();
    p.partition_node = rec.value("partition_node", -1);
    auto truck_route = rec.at("truck_route").get<std::vector<int>>();
    auto drone_route = rec.at("drone_route").get<std::vector<int>>();
    if (truck_route.size() >= 2) {
      p.truck_customers.assign(truck_route.begin() + 1, truck_route.end() - 1);
    }
    if (drone_route.size() >= 2) {
      p.drone_customers.assign(drone_route.begin() + 1, drone_route.end() - 1);
    }
    sol.tuples.push_back(std::move(p));
  }
  sol.evaluation = evaluate_solution(sol.tuples, inst, tm);
  return sol;
}

}  // namespace fstspmd
