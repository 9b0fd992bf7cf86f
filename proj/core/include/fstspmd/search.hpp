#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fstspmd/instance.hpp"
#include "fstspmd/mdspp.hpp"
#include "fstspmd/rng.hpp"
#include "fstspmd/solution.hpp"
#include "fstspmd/timing.hpp"
#include "fstspmd/tour.hpp"

namespace fstspmd {

// ---------------------------------------------------------------------------
// Neighbourhoods over customer positions 1..n of a giant tour.
//
//   one_point  move the customer at position a so that it ends up at
//              position b (b != a; adjacent pairs only as b = a+1, since
//              a -> a-1 yields the same tour)
//   two_point  swap positions a < b
//   two_opt    reverse positions a..b, a < b
// ---------------------------------------------------------------------------
enum class NeighborhoodKind { one_point, two_point, two_opt };

struct Move {
  NeighborhoodKind kind = NeighborhoodKind::one_point;
  int a = 0;
  int b = 0;
};

// Writes the neighbour into `out` (resized as needed).
void apply_move(const Tour& tour, const Move& move, Tour& out);

std::size_t neighborhood_size(int n, NeighborhoodKind kind);

template <class F>
void for_each_move(int n, NeighborhoodKind kind, F&& visit) {
  switch (kind) {
    case NeighborhoodKind::one_point:
      for (int a = 1; a <= n; ++a) {
        for (int b = 1; b <= n; ++b) {
          if (b == a || b == a - 1) continue;
          visit(Move{kind, a, b});
        }
      }
      break;
    case NeighborhoodKind::two_point:
    case NeighborhoodKind::two_opt:
      for (int a = 1; a < n; ++a) {
        for (int b = a + 1; b <= n; ++b) visit(Move{kind, a, b});
      }
      break;
  }
}

// Every neighbour of the given kind, in enumeration order.
std::vector<Tour> neighbors(const Tour& tour, NeighborhoodKind kind);

// ---------------------------------------------------------------------------
// Perturbation
// ---------------------------------------------------------------------------

// Inclusive range of tour positions.
struct Range {
  int first = 0;
  int last = 0;

  int length() const { return last - first + 1; }
  bool overlaps(const Range& o) const { return first <= o.last && o.first <= last; }
};

struct Perturbation {
  Tour tour;
  Range first;
  std::optional<Range> second;  // absent when only one reversal was possible
  int mutation_draws = 0;  // positions that drew a Bernoulli trial
  int mutation_swaps = 0;  // of those, how many swapped
};

// Reverses `first`, then `second`.
Tour reverse_ranges(const Tour& tour, Range first, std::optional<Range> second);

// Two random reversals (ranges of length >= 2, redrawn up to 20 times to avoid
// overlap). Tours with fewer than 4 customers get a single reversal; a single
// customer is returned unchanged.
Perturbation perturb_small(const Tour& tour, Rng& rng);

// perturb_small followed by: every position inside each reversed range swaps,
// with probability p_mut, with another uniformly chosen position of the same
// range.
Perturbation perturb_big(const Tour& bsf_tour, Rng& rng, double p_mut);

// ---------------------------------------------------------------------------
// Driver
// ---------------------------------------------------------------------------

// External tour when params carry one, otherwise nearest neighbour + 2-opt.
Tour initial_tour(const Instance& inst, const SolverParams& params);

struct Incumbent {
  Tour tour;
  double objective = kInfinity;
};

struct SearchState {
  Tour current;
  Incumbent benchmark;  // best of the current improvement phase
  Incumbent bsf;        // best so far
  int no_improve = 0;
  int small_perturbations = 0;
  long iteration = 0;
  Rng rng{1};
};

// Explores the one-point, two-point and 2-opt neighbourhoods of
// state.current (all three from the same tour unless `sequential`, where each
// family starts from the best tour found so far in the phase). The benchmark
// moves to any strictly better neighbour; afterwards the current tour follows
// the benchmark and the best-so-far is updated. Returns whether the benchmark
// improved. A deadline, when given, stops the scan early.
using Deadline = std::optional<std::chrono::steady_clock::time_point>;
bool improvement_phase(SearchState& state, const Instance& inst, const TimingModel& tm,
                       SplitWorkspace& ws, const Deadline& deadline = std::nullopt,
                       bool sequential = false);

enum class Phase { improve, small, big };
std::string_view to_string(Phase p);

struct LogEntry {
  long iteration = 0;
  double elapsed_ms = 0.0;
  Phase phase = Phase::improve;
  double benchmark = 0.0;
  double bsf = 0.0;
};

struct SolveResult {
  Solution best;
  double initial_objective = 0.0;
  std::vector<LogEntry> log;
  long iterations = 0;
  std::string stop_reason;  // "no-improve" or "time-limit"
};

// Iterated local search over giant tours; every tour is evaluated with the
// split. Deterministic for fixed (instance, params) unless the time limit
// cuts the run.
SolveResult solve(const Instance& inst, const SolverParams& params);

// CSV: iteration,elapsed_ms,phase,benchmark_obj,bsf_obj. Without timing the
// elapsed_ms field is left empty so that logs of identical runs are identical.
void write_run_log(std::ostream& os, const std::vector<LogEntry>& log, bool with_timing);

}  // namespace fstspmd
