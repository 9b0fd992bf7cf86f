#include "fstspmd/mdspp.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fstspmd {

ArcTime arc_time(const Instance& inst, const Tour& tour, int i, int j, int k,
                 const TimingModel& tm) {
  const int last = static_cast<int>(tour.size()) - 1;
  if (!(0 <= i && i <= k && k < j && j <= last)) {
    throw std::invalid_argument("arc_time: need 0 <= i <= k < j <= n+1, got i=" +
                                std::to_string(i) + " k=" + std::to_string(k) +
                                " j=" + std::to_string(j));
  }
  if (k - i > tm.max_drops) {
    throw std::invalid_argument("arc_time: partition exceeds the drop limit");
  }
  const int n = inst.n;
  auto node = [&](int pos) { return tour[static_cast<std::size_t>(pos)]; };

  ArcTime a;
  if (k == i) {
    for (int m = i; m < j; ++m) {
      a.truck += inst.truck_time(node(m), node(m + 1)) + tm.svc_truck(node(m + 1), n);
    }
    a.coordinated = a.truck;
    return a;
  }

  for (int m = i + 1; m <= k; ++m) {
    if (!tm.eligible_node(node(m))) a.eligible = false;
    a.drone += inst.drone_time(node(m - 1), node(m)) + tm.drone_service;
  }
  a.drone += inst.drone_time(node(k), node(j));

  a.truck = inst.truck_time(node(i), node(k + 1)) + tm.svc_truck(node(k + 1), n);
  for (int m = k + 1; m < j; ++m) {
    a.truck += inst.truck_time(node(m), node(m + 1)) + tm.svc_truck(node(m + 1), n);
  }
  a.flight = std::max(a.truck, a.drone);
  a.coordinated = tm.launch_time + a.flight + tm.retrieve_time;
  return a;
}

void SplitWorkspace::resize(std::size_t positions) {
  labels.resize(positions);
  pred.resize(positions);
  truck_leg.resize(positions);
  drone_leg.resize(positions);
}

namespace {

struct NoObserver {
  void operator()(int, double, double) const {}
};

// Label-correcting pass in tour order. Positions are processed left to right,
// so T[i] is final when arcs leaving i are relaxed. Returns false if it gave up
// because every open label already reached `cutoff`.
template <bool kTrackPred, class Observer>
bool run_split(const Instance& inst, const Tour& tour, const TimingModel& tm, SplitWorkspace& ws,
               double cutoff, Observer&& observe) {
  const int last = static_cast<int>(tour.size()) - 1;  // n + 1
  const int n = last - 1;
  const std::size_t positions = tour.size();
  ws.resize(positions);
  double* T = ws.labels.data();
  double* tleg = ws.truck_leg.data();
  double* dleg = ws.drone_leg.data();
  const int* sigma = tour.order.data();
  const auto dim = static_cast<std::size_t>(inst.truck_time.dim());
  const double* truck = inst.truck_time.data();
  const double* drone = inst.drone_time.data();

  tleg[0] = dleg[0] = 0.0;
  for (int p = 1; p <= last; ++p) {
    const std::size_t from = static_cast<std::size_t>(sigma[p - 1]) * dim;
    tleg[p] = truck[from + static_cast<std::size_t>(sigma[p])];
    dleg[p] = drone[from + static_cast<std::size_t>(sigma[p])];
  }
  std::fill(T, T + positions, kInfinity);
  T[0] = 0.0;

  const double limit = tm.endurance + kTimeTolerance;
  const double extras = tm.launch_time + tm.retrieve_time;
  const int max_drops = tm.max_drops;
  auto svc_truck_at = [&](int pos) { return pos <= n ? tm.truck_service : 0.0; };

  auto relax = [&](int j, double value, int from, int partition) {
    if (value < T[j] - kTimeTolerance) {
      observe(j, T[j], value);
      T[j] = value;
      if constexpr (kTrackPred) ws.pred[static_cast<std::size_t>(j)] = {from, partition};
    }
  };

  for (int i = 0; i <= n; ++i) {
    const double Ti = T[i];
    if (cutoff < kInfinity) {
      double open = Ti;
      for (int b = i + 1; b <= last; ++b) open = std::min(open, T[b]);
      if (open >= cutoff) return false;
    }
    // Truck carries the drone over one leg.
    relax(i + 1, Ti + tleg[i + 1] + svc_truck_at(i + 1), i, i);

    // Any arc whose value reaches the cutoff cannot lie on a path below it;
    // both legs only grow along the loops, so they can stop there.
    const double bound = std::min(limit, cutoff - Ti - extras);
    const std::size_t launch_row = static_cast<std::size_t>(sigma[i]) * dim;
    double drone_prefix = 0.0;
    const int k_end = std::min(i + max_drops, n);
    for (int k = i + 1; k <= k_end; ++k) {
      if (!tm.eligible[static_cast<std::size_t>(sigma[k])]) break;
      drone_prefix += dleg[k] + tm.drone_service;
      if (drone_prefix > bound) break;
      const double* drone_row = drone + static_cast<std::size_t>(sigma[k]) * dim;
      double truck_core = truck[launch_row + static_cast<std::size_t>(sigma[k + 1])] +
                          svc_truck_at(k + 1);
      for (int j = k + 1; j <= last; ++j) {
        if (j > k + 1) truck_core += tleg[j] + svc_truck_at(j);
        if (truck_core > bound) break;
        const double drone_core = drone_prefix + drone_row[sigma[j]];
        const double flight = std::max(truck_core, drone_core);
        if (flight > bound) continue;
        relax(j, Ti + extras + flight, i, k);
      }
    }
  }
  return true;
}

SplitResult finish(const Tour& tour, SplitWorkspace& ws) {
  SplitResult r;
  const int last = static_cast<int>(tour.size()) - 1;
  r.labels = ws.labels;
  r.pred = ws.pred;
  r.pred[0] = {};
  r.completion = r.labels[static_cast<std::size_t>(last)];
  for (int j = last; j > 0;) {
    const SplitArc arc = r.pred[static_cast<std::size_t>(j)];
    r.tuples.push_back({arc.from, j, arc.partition});
    j = arc.from;
  }
  std::reverse(r.tuples.begin(), r.tuples.end());
  return r;
}

}  // namespace

SplitResult split(const Instance& inst, const Tour& tour, const TimingModel& tm) {
  SplitWorkspace ws;
  run_split<true>(inst, tour, tm, ws, kInfinity, NoObserver{});
  return finish(tour, ws);
}

SplitResult split(const Instance& inst, const Tour& tour, const TimingModel& tm,
                  const LabelObserver& observer) {
  SplitWorkspace ws;
  run_split<true>(inst, tour, tm, ws, kInfinity, observer);
  return finish(tour, ws);
}

double split_completion(const Instance& inst, const Tour& tour, const TimingModel& tm,
                        SplitWorkspace& ws, double cutoff) {
  if (!run_split<false>(inst, tour, tm, ws, cutoff, NoObserver{})) return kInfinity;
  return ws.labels.back();
}

std::vector<PlanTuple> plan_from_split(const Tour& tour, const SplitResult& result) {
  std::vector<PlanTuple> plan;
  plan.reserve(result.tuples.size());
  for (const PositionTuple& t : result.tuples) {
    PlanTuple p;
    p.launch = tour[static_cast<std::size_t>(t.from)];
    p.recovery = tour[static_cast<std::size_t>(t.to)];
    p.partition_node = tour[static_cast<std::size_t>(t.partition)];
    for (int m = t.from + 1; m <= t.partition; ++m) {
      p.drone_customers.push_back(tour[static_cast<std::size_t>(m)]);
    }
    for (int m = t.partition + 1; m < t.to; ++m) {
      p.truck_customers.push_back(tour[static_cast<std::size_t>(m)]);
    }
    plan.push_back(std::move(p));
  }
  return plan;
}

Solution solve_tour(const Instance& inst, const Tour& tour, const TimingModel& tm) {
  Solution sol;
  sol.tour = tour;
  sol.tuples = plan_from_split(tour, split(inst, tour, tm));
  sol.evaluation = evaluate_solution(sol.tuples, inst, tm);
  return sol;
}

}  // namespace fstspmd
