#include "fstspmd/tsp.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "fstspmd/timing.hpp"

namespace fstspmd {

namespace {
constexpr double kMinGain = 1e-10;
}

bool truck_matrix_symmetric(const Instance& inst) {
  const int dim = static_cast<int>(inst.truck_time.dim());
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      if (inst.truck_time(i, j) != inst.truck_time(j, i)) return false;
    }
  }
  return true;
}

Tour nearest_neighbor_tour(const Instance& inst, int first) {
  const int n = inst.n;
  std::vector<bool> used(static_cast<std::size_t>(n) + 1, false);
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  int at = 0;
  if (first >= 1 && first <= n) {
    order.push_back(first);
    used[static_cast<std::size_t>(first)] = true;
    at = first;
  }
  while (static_cast<int>(order.size()) < n) {
    int best = -1;
    double best_time = kInfinity;
    for (int v = 1; v <= n; ++v) {
      if (!used[static_cast<std::size_t>(v)] && inst.truck_time(at, v) < best_time) {
        best = v;
        best_time = inst.truck_time(at, v);
      }
    }
    order.push_back(best);
    used[static_cast<std::size_t>(best)] = true;
    at = best;
  }
  return make_tour(order, n);
}

int two_opt(const Instance& inst, Tour& tour) {
  const int n = tour.customers();
  const TimeMatrix& t = inst.truck_time;
  auto& s = tour.order;
  int moves = 0;
  bool improved = true;
  while (improved) {
    improved = false;
    for (int a = 1; a < n; ++a) {
      double fwd = 0.0, rev = 0.0;  // inner path cost of s[a..b] in both directions
      for (int b = a + 1; b <= n; ++b) {
        fwd += t(s[b - 1], s[b]);
        rev += t(s[b], s[b - 1]);
        const double delta = t(s[a - 1], s[b]) + t(s[a], s[b + 1]) - t(s[a - 1], s[a]) -
                             t(s[b], s[b + 1]) + rev - fwd;
        if (delta < -kMinGain) {
          std::reverse(s.begin() + a, s.begin() + b + 1);
          ++moves;
          improved = true;
          fwd = rev = 0.0;
          for (int m = a + 1; m <= b; ++m) {
            fwd += t(s[m - 1], s[m]);
            rev += t(s[m], s[m - 1]);
          }
        }
      }
    }
  }
  return moves;
}

int or_opt(const Instance& inst, Tour& tour) {
  const int n = tour.customers();
  const TimeMatrix& t = inst.truck_time;
  int moves = 0;
  bool improved = true;
  while (improved) {
    improved = false;
    auto& s = tour.order;
    for (int len = 1; len <= 3 && !improved; ++len) {
      for (int a = 1; a + len - 1 <= n && !improved; ++a) {
        const int e = a + len - 1;
        double fwd = 0.0, rev = 0.0;
        for (int m = a; m < e; ++m) {
          fwd += t(s[m], s[m + 1]);
          rev += t(s[m + 1], s[m]);
        }
        const double removal = t(s[a - 1], s[a]) + t(s[e], s[e + 1]) - t(s[a - 1], s[e + 1]);
        for (int c = 0; c <= n; ++c) {
          if (c >= a - 1 && c <= e) continue;
          const int u = s[c], v = s[c + 1];
          const double keep = t(u, s[a]) + t(s[e], v) - t(u, v);
          const double flip = t(u, s[e]) + t(s[a], v) - t(u, v) + rev - fwd;
          const bool reversed = flip < keep;
          if (std::min(keep, flip) - removal < -kMinGain) {
            std::vector<int> seg(s.begin() + a, s.begin() + e + 1);
            if (reversed) std::reverse(seg.begin(), seg.end());
            std::vector<int> next;
            next.reserve(s.size());
            for (int p = 0; p <= n + 1; ++p) {
              if (p >= a && p <= e) continue;
              next.push_back(s[p]);
              if (p == c) next.insert(next.end(), seg.begin(), seg.end());
            }
            s = std::move(next);
            ++moves;
            improved = true;
            break;
          }
        }
      }
    }
  }
  return moves;
}

Tour multistart_tour(const Instance& inst) {
  Tour best;
  double best_len = 0.0;
  // forced first customers spread over the index range
  const int extra = std::min(inst.n, 16);
  for (int s = 0; s <= extra; ++s) {
    const int first = s == 0 ? 0 : 1 + (s - 1) * inst.n / extra;
    Tour tour = nearest_neighbor_tour(inst, first);
    while (two_opt(inst, tour) + or_opt(inst, tour) > 0) {
    }
    const double len = truck_tour_duration(inst, tour);
    if (s == 0 || len < best_len) {
      best = std::move(tour);
      best_len = len;
    }
  }
  return best;
}

}  // namespace fstspmd
