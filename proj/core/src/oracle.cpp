#include "fstspmd/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>

#include "fstspmd/tsp.hpp"

namespace fstspmd {

namespace {

// Timing of one operation over the subsequence nodes[0..len-1]; bit b of
// `drone_mask` sends nodes[b+1] with the drone. Returns kInfinity when the
// operation is infeasible (ineligible drone customer or endurance).
double operation_cost(const Instance& inst, const TimingModel& tm, const int* nodes, int len,
                      std::uint32_t drone_mask) {
  const int n = inst.n;
  const int launch = nodes[0];
  const int recovery = nodes[len - 1];
  auto is_customer = [n](int v) { return v >= 1 && v <= n; };

  double truck = 0.0;
  int truck_at = launch;
  int truck_served = 0;
  double drone = 0.0;
  int drone_at = launch;
  int drone_served = 0;
  for (int b = 0; b + 2 < len; ++b) {
    const int v = nodes[b + 1];
    if (drone_mask & (std::uint32_t{1} << b)) {
      if (!tm.eligible[static_cast<std::size_t>(v)]) return kInfinity;
      drone += inst.drone_time(drone_at, v);
      drone_at = v;
      ++drone_served;
    } else {
      truck += inst.truck_time(truck_at, v);
      truck_at = v;
      ++truck_served;
    }
  }
  truck += inst.truck_time(truck_at, recovery);
  if (is_customer(recovery)) ++truck_served;
  truck += tm.truck_service * truck_served;
  if (drone_mask == 0) return truck;

  drone += inst.drone_time(drone_at, recovery) + tm.drone_service * drone_served;
  const double flight = truck > drone ? truck : drone;
  if (flight > tm.endurance + 1e-9) return kInfinity;
  return tm.launch_time + flight + tm.retrieve_time;
}

struct BestArc {
  double cost = kInfinity;
  std::uint32_t mask = 0;
};

// Cheapest operation between positions i and j of `nodes` (absolute ids by
// position). Adds the number of enumerated candidates to `explored`.
BestArc best_operation(const Instance& inst, const TimingModel& tm, const int* nodes, int i, int j,
                       bool restricted, std::uint64_t& explored) {
  BestArc best;
  const int interior = j - i - 1;
  const int len = j - i + 1;
  auto consider = [&](std::uint32_t mask) {
    ++explored;
    const double c = operation_cost(inst, tm, nodes + i, len, mask);
    if (c < best.cost) best = {c, mask};
  };
  if (restricted) {
    const int top = std::min(interior, tm.max_drops);
    for (int drops = 0; drops <= top; ++drops) consider((std::uint32_t{1} << drops) - 1);
  } else {
    const std::uint32_t count = std::uint32_t{1} << interior;
    for (std::uint32_t mask = 0; mask < count; ++mask) {
      if (std::popcount(mask) <= tm.max_drops) consider(mask);
    }
  }
  return best;
}

PlanTuple make_tuple(const int* nodes, int i, int j, std::uint32_t mask) {
  PlanTuple p;
  p.launch = nodes[i];
  p.recovery = nodes[j];
  for (int b = 0; i + b + 1 < j; ++b) {
    const int v = nodes[i + b + 1];
    if (mask & (std::uint32_t{1} << b)) p.drone_customers.push_back(v);
    else p.truck_customers.push_back(v);
  }
  const bool prefix = (mask & (mask + 1)) == 0;
  if (prefix) p.partition_node = nodes[i + std::popcount(mask)];
  return p;
}

}  // namespace

OracleResult enumerate_split_oracle(const Instance& inst, const Tour& tour, const TimingModel& tm,
                                    bool restricted) {
  if (inst.n > kSplitOracleMaxCustomers) {
    throw OracleRefusal("split oracle refuses n=" + std::to_string(inst.n) + " > " +
                        std::to_string(kSplitOracleMaxCustomers));
  }
  validate_tour(tour, inst.n);
  const int last = inst.n + 1;
  const int* nodes = tour.order.data();

  OracleResult r;
  r.tour = tour;
  r.labels.assign(static_cast<std::size_t>(last) + 1, kInfinity);
  std::vector<int> from(static_cast<std::size_t>(last) + 1, -1);
  std::vector<std::uint32_t> via(static_cast<std::size_t>(last) + 1, 0);
  r.labels[0] = 0.0;
  for (int j = 1; j <= last; ++j) {
    for (int i = 0; i < j; ++i) {
      const BestArc arc = best_operation(inst, tm, nodes, i, j, restricted, r.explored);
      const double value = r.labels[static_cast<std::size_t>(i)] + arc.cost;
      if (value < r.labels[static_cast<std::size_t>(j)]) {
        r.labels[static_cast<std::size_t>(j)] = value;
        from[static_cast<std::size_t>(j)] = i;
        via[static_cast<std::size_t>(j)] = arc.mask;
      }
    }
  }
  r.completion = r.labels[static_cast<std::size_t>(last)];
  for (int j = last; j > 0; j = from[static_cast<std::size_t>(j)]) {
    r.plan.push_back(make_tuple(nodes, from[static_cast<std::size_t>(j)], j,
                                via[static_cast<std::size_t>(j)]));
  }
  std::reverse(r.plan.begin(), r.plan.end());
  return r;
}

OracleResult exact_solve_tiny(const Instance& inst, const TimingModel& tm) {
  const int n = inst.n;
  if (n > kExactTinyMaxCustomers) {
    throw OracleRefusal("exact solver refuses n=" + std::to_string(n) + " > " +
                        std::to_string(kExactTinyMaxCustomers));
  }
  // Depth-first over tour prefixes; the label of a position depends only on
  // the prefix, so each prefix is evaluated once.
  std::vector<int> nodes(static_cast<std::size_t>(n) + 2, 0);
  std::vector<double> labels(static_cast<std::size_t>(n) + 2, kInfinity);
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  labels[0] = 0.0;
  nodes[static_cast<std::size_t>(n) + 1] = n + 1;
  double best = kInfinity;
  std::vector<int> best_nodes;
  std::uint64_t explored = 0;

  auto label_at = [&](int p) {
    double value = kInfinity;
    for (int i = 0; i < p; ++i) {
      const BestArc arc = best_operation(inst, tm, nodes.data(), i, p, false, explored);
      value = std::min(value, labels[static_cast<std::size_t>(i)] + arc.cost);
    }
    labels[static_cast<std::size_t>(p)] = value;
  };

  auto dfs = [&](auto&& self, int p) -> void {
    if (p == n + 1) {
      label_at(p);
      if (labels[static_cast<std::size_t>(p)] < best) {
        best = labels[static_cast<std::size_t>(p)];
        best_nodes = nodes;
      }
      return;
    }
    for (int v = 1; v <= n; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      used[static_cast<std::size_t>(v)] = true;
      nodes[static_cast<std::size_t>(p)] = v;
      label_at(p);
      self(self, p + 1);
      used[static_cast<std::size_t>(v)] = false;
    }
  };
  dfs(dfs, 1);

  Tour tour{best_nodes};
  OracleResult r = enumerate_split_oracle(inst, tour, tm, false);
  r.explored += explored;
  return r;
}

namespace {

TspResult held_karp(const Instance& inst) {
  const int n = inst.n;
  const TimeMatrix& t = inst.truck_time;
  const std::size_t states = std::size_t{1} << n;
  const auto un = static_cast<std::size_t>(n);
  std::vector<double> dp(states * un, kInfinity);
  std::vector<std::int8_t> parent(states * un, -1);
  for (int v = 0; v < n; ++v) dp[(std::size_t{1} << v) * un + static_cast<std::size_t>(v)] = t(0, v + 1);
  for (std::size_t mask = 1; mask < states; ++mask) {
    for (int last = 0; last < n; ++last) {
      const double base = dp[mask * un + static_cast<std::size_t>(last)];
      if (!(mask & (std::size_t{1} << last)) || base == kInfinity) continue;
      for (int next = 0; next < n; ++next) {
        if (mask & (std::size_t{1} << next)) continue;
        const std::size_t to = (mask | (std::size_t{1} << next)) * un + static_cast<std::size_t>(next);
        const double value = base + t(last + 1, next + 1);
        if (value < dp[to]) {
          dp[to] = value;
          parent[to] = static_cast<std::int8_t>(last);
        }
      }
    }
  }
  const std::size_t full = states - 1;
  double best = kInfinity;
  int best_last = 0;
  for (int last = 0; last < n; ++last) {
    const double value = dp[full * un + static_cast<std::size_t>(last)] + t(last + 1, n + 1);
    if (value < best) {
      best = value;
      best_last = last;
    }
  }
  std::vector<int> order;
  std::size_t mask = full;
  for (int at = best_last; at >= 0;) {
    order.push_back(at + 1);
    const int prev = parent[mask * un + static_cast<std::size_t>(at)];
    mask &= ~(std::size_t{1} << at);
    at = prev;
  }
  std::reverse(order.begin(), order.end());
  return {make_tour(order, n), best};
}

}  // namespace

TspResult tsp_baseline(const Instance& inst, TspMode mode, double truck_service) {
  TspResult r;
  if (mode == TspMode::exact_dp) {
    if (inst.n > kHeldKarpMaxCustomers) {
      throw OracleRefusal("Held-Karp refuses n=" + std::to_string(inst.n) + " > " +
                          std::to_string(kHeldKarpMaxCustomers));
    }
    r = held_karp(inst);
  } else {
    r.tour = multistart_tour(inst);
    r.duration = truck_tour_duration(inst, r.tour);
  }
  r.duration += truck_service * inst.n;
  return r;
}

}  // namespace fstspmd
