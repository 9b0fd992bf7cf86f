#include "fstspmd/search.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "fstspmd/tsp.hpp"

namespace fstspmd {

void apply_move(const Tour& tour, const Move& move, Tour& out) {
  out.order = tour.order;
  auto& s = out.order;
  const int a = move.a, b = move.b;
  switch (move.kind) {
    case NeighborhoodKind::one_point:
      if (b > a) {
        std::rotate(s.begin() + a, s.begin() + a + 1, s.begin() + b + 1);
      } else {
        std::rotate(s.begin() + b, s.begin() + a, s.begin() + a + 1);
      }
      break;
    case NeighborhoodKind::two_point:
      std::swap(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]);
      break;
    case NeighborhoodKind::two_opt:
      std::reverse(s.begin() + a, s.begin() + b + 1);
      break;
  }
}

std::size_t neighborhood_size(int n, NeighborhoodKind kind) {
  if (n < 2) return 0;
  const auto un = static_cast<std::size_t>(n);
  if (kind == NeighborhoodKind::one_point) return (un - 1) * (un - 1);
  return un * (un - 1) / 2;
}

std::vector<Tour> neighbors(const Tour& tour, NeighborhoodKind kind) {
  std::vector<Tour> out;
  out.reserve(neighborhood_size(tour.customers(), kind));
  Tour scratch;
  for_each_move(tour.customers(), kind, [&](const Move& m) {
    apply_move(tour, m, scratch);
    out.push_back(scratch);
  });
  return out;
}

Tour reverse_ranges(const Tour& tour, Range first, std::optional<Range> second) {
  Tour out = tour;
  auto rev = [&](Range r) {
    std::reverse(out.order.begin() + r.first, out.order.begin() + r.last + 1);
  };
  rev(first);
  if (second) rev(*second);
  return out;
}

namespace {

Range draw_range(int n, Rng& rng) {
  int a = 0, b = 0;
  do {
    a = rng.uniform_int(1, n);
    b = rng.uniform_int(1, n);
  } while (a == b);
  return {std::min(a, b), std::max(a, b)};
}

constexpr int kMaxRedraws = 20;

}  // namespace

Perturbation perturb_small(const Tour& tour, Rng& rng) {
  const int n = tour.customers();
  Perturbation p;
  if (n < 2) {
    p.tour = tour;
    p.first = {1, n};
    return p;
  }
  if (n < 4) {
    p.first = draw_range(n, rng);
    p.tour = reverse_ranges(tour, p.first, std::nullopt);
    return p;
  }
  Range r1 = draw_range(n, rng);
  Range r2 = draw_range(n, rng);
  for (int redraw = 0; redraw < kMaxRedraws && r1.overlaps(r2); ++redraw) {
    r1 = draw_range(n, rng);
    r2 = draw_range(n, rng);
  }
  p.first = r1;
  p.second = r2;
  p.tour = reverse_ranges(tour, r1, r2);
  return p;
}

Perturbation perturb_big(const Tour& bsf_tour, Rng& rng, double p_mut) {
  Perturbation p = perturb_small(bsf_tour, rng);
  auto mutate = [&](Range r) {
    if (r.length() < 2) return;
    for (int pos = r.first; pos <= r.last; ++pos) {
      ++p.mutation_draws;
      if (!rng.bernoulli(p_mut)) continue;
      int other = r.first + static_cast<int>(rng.below(static_cast<std::uint64_t>(r.length() - 1)));
      if (other >= pos) ++other;
      std::swap(p.tour[static_cast<std::size_t>(pos)], p.tour[static_cast<std::size_t>(other)]);
      ++p.mutation_swaps;
    }
  };
  mutate(p.first);
  if (p.second) mutate(*p.second);
  return p;
}

Tour initial_tour(const Instance& inst, const SolverParams& params) {
  if (params.initial_customers) return make_tour(*params.initial_customers, inst.n);
  return multistart_tour(inst);
}

bool improvement_phase(SearchState& state, const Instance& inst, const TimingModel& tm,
                       SplitWorkspace& ws, const Deadline& deadline, bool sequential) {
  Tour base = state.current;
  const int n = base.customers();
  Tour candidate;
  Tour best_tour;
  double best = state.benchmark.objective;
  bool improved = false;
  bool stopped = false;
  unsigned evaluated = 0;

  for (auto kind : {NeighborhoodKind::one_point, NeighborhoodKind::two_point,
                    NeighborhoodKind::two_opt}) {
    if (sequential && improved) base = best_tour;
    for_each_move(n, kind, [&](const Move& m) {
      if (stopped) return;
      if (deadline && (++evaluated & 63u) == 0 &&
          std::chrono::steady_clock::now() >= *deadline) {
        stopped = true;
        return;
      }
      apply_move(base, m, candidate);
      const double cutoff = best - kTimeTolerance;
      const double value = split_completion(inst, candidate, tm, ws, cutoff);
      if (value < cutoff) {
        best = value;
        best_tour = candidate;
        improved = true;
      }
    });
  }

  if (improved) {
    state.benchmark = {best_tour, best};
    state.current = std::move(best_tour);
  }
  if (state.benchmark.objective < state.bsf.objective - kTimeTolerance) {
    state.bsf = state.benchmark;
  }
  return improved;
}

std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::improve: return "improve";
    case Phase::small: return "small";
    case Phase::big: return "big";
  }
  return "?";
}

SolveResult solve(const Instance& inst, const SolverParams& params) {
  const TimingModel tm = make_timing_model(inst, params);
  const auto start = std::chrono::steady_clock::now();
  Deadline deadline;
  if (params.time_limit_s) {
    deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                           std::chrono::duration<double>(*params.time_limit_s));
  }
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };
  auto past_deadline = [&] { return deadline && std::chrono::steady_clock::now() >= *deadline; };

  SplitWorkspace ws;
  SearchState st;
  st.rng = Rng(params.seed);
  st.current = initial_tour(inst, params);
  const double initial = split_completion(inst, st.current, tm, ws);
  st.benchmark = {st.current, initial};
  st.bsf = st.benchmark;

  SolveResult result;
  result.initial_objective = initial;
  while (true) {
    ++st.iteration;
    const double bsf_before = st.bsf.objective;
    const bool improved = improvement_phase(st, inst, tm, ws, deadline, params.sequential_neighborhoods);
    Phase phase = Phase::improve;
    if (!improved && !past_deadline()) {
      Perturbation p;
      if (st.small_perturbations >= params.eta) {
        p = perturb_big(st.bsf.tour, st.rng, params.mutation_prob);
        st.small_perturbations = 0;
        phase = Phase::big;
      } else {
        p = perturb_small(st.current, st.rng);
        ++st.small_perturbations;
        phase = Phase::small;
      }
      st.current = std::move(p.tour);
      st.benchmark = {st.current, split_completion(inst, st.current, tm, ws)};
      if (st.benchmark.objective < st.bsf.objective - kTimeTolerance) st.bsf = st.benchmark;
    }
    if (st.bsf.objective < bsf_before - kTimeTolerance) {
      st.no_improve = 0;
      st.small_perturbations = 0;
    } else {
      ++st.no_improve;
    }
    result.log.push_back({st.iteration, elapsed_ms(), phase, st.benchmark.objective,
                          st.bsf.objective});
    if (st.no_improve >= params.stop_no_improve) {
      result.stop_reason = "no-improve";
      break;
    }
    if (past_deadline()) {
      result.stop_reason = "time-limit";
      break;
    }
  }
  result.iterations = st.iteration;
  result.best = solve_tour(inst, st.bsf.tour, tm);
  return result;
}

void write_run_log(std::ostream& os, const std::vector<LogEntry>& log, bool with_timing) {
  os << "iteration,elapsed_ms,phase,benchmark_obj,bsf_obj\n";
  char buf[160];
  for (const LogEntry& e : log) {
    if (with_timing) {
      std::snprintf(buf, sizeof buf, "%ld,%.3f,%s,%.6f,%.6f\n", e.iteration, e.elapsed_ms,
                    std::string(to_string(e.phase)).c_str(), e.benchmark, e.bsf);
    } else {
      std::snprintf(buf, sizeof buf, "%ld,,%s,%.6f,%.6f\n", e.iteration,
                    std::string(to_string(e.phase)).c_str(), e.benchmark, e.bsf);
    }
    os << buf;
  }
}

}  // namespace fstspmd
