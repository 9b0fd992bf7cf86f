// Acceptance suite. One line per criterion:
//   criterion <k> PASS|FAIL: <details>
// Exit status is nonzero when any selected criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fstspmd/bench.hpp"
#include "fstspmd/mdspp.hpp"
#include "fstspmd/oracle.hpp"
#include "fstspmd/search.hpp"
#include "generators.hpp"

using namespace fstspmd;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol * std::max(1.0, std::fabs(b)); }

// Random asymmetric matrix closed under shortest paths, so the triangle
// inequality holds. Node n+1 copies the depot.
TimeMatrix random_metric_matrix(int n, Rng& rng, double scale) {
  const int m = n + 1;
  std::vector<double> d(static_cast<std::size_t>(m * m), 0.0);
  auto at = [&](int i, int j) -> double& { return d[static_cast<std::size_t>(i * m + j)]; };
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j) at(i, j) = scale * (0.05 + rng.uniform01());
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) at(i, j) = std::min(at(i, j), at(i, k) + at(k, j));
  TimeMatrix out(static_cast<std::size_t>(n + 2));
  auto orig = [&](int v) { return v == n + 1 ? 0 : v; };
  for (int i = 0; i < n + 2; ++i)
    for (int j = 0; j < n + 2; ++j) out(i, j) = at(orig(i), orig(j));
  return out;
}

Instance random_matrix_instance(int n, Rng& rng) {
  Instance inst;
  inst.name = "matrix-" + std::to_string(n);
  inst.n = n;
  inst.metric.truck_metric = TruckMetric::matrix_given;
  inst.metric.drone_metric = DroneMetric::matrix_given;
  inst.truck_time = random_metric_matrix(n, rng, 10.0);
  inst.drone_time = random_metric_matrix(n, rng, 5.0);
  inst.truck_matrix_explicit = inst.drone_matrix_explicit = true;
  inst.eligible.assign(static_cast<std::size_t>(n) + 1, true);
  return inst;
}

// 1. split equals the restricted enumeration on random tours.
Verdict criterion_1() {
  const auto t0 = Clock::now();
  Rng rng(20240601);
  int cases = 0, agree = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(10));
    Instance inst;
    if (trial % 2 == 0) {
      inst = random_matrix_instance(n, rng);
    } else {
      gen::RandomInstanceOptions opt;
      opt.manhattan_truck = trial % 4 == 1;
      opt.speed_ratio = 0.5 + 2.5 * rng.uniform01();
      inst = gen::random_instance(n, 7000 + static_cast<std::uint64_t>(trial), opt);
    }
    for (int v = 1; v <= n; ++v) inst.eligible[static_cast<std::size_t>(v)] = !rng.bernoulli(0.25);
    SolverParams p;
    p.max_drops = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    if (rng.bernoulli(0.5)) p.endurance = (trial % 2 == 0 ? 5.0 : 40.0) * (0.3 + 2.0 * rng.uniform01());
    if (rng.bernoulli(0.3)) p.launch_time = rng.uniform01();
    if (rng.bernoulli(0.3)) p.retrieve_time = rng.uniform01();
    if (rng.bernoulli(0.3)) p.truck_service = rng.uniform01();
    if (rng.bernoulli(0.3)) p.drone_service = rng.uniform01();
    const TimingModel tm = make_timing_model(inst, p);
    const Tour tour = gen::random_tour(n, rng);
    const double a = split(inst, tour, tm).completion;
    const double b = enumerate_split_oracle(inst, tour, tm, true).completion;
    ++cases;
    const double diff = std::fabs(a - b);
    worst = std::max(worst, diff);
    if (diff <= 1e-9) ++agree;
  }
  const double secs = seconds_since(t0);
  return {agree == cases && cases >= 200 && secs < 60.0,
          fmt("%d/%d tours agree, max |diff| %.3g, %.1fs", agree, cases, worst, secs)};
}

// 2. search never beats the exhaustive optimum and usually reaches it.
Verdict criterion_2() {
  const auto t0 = Clock::now();
  Rng rng(77);
  int runs = 0, matched = 0, below = 0;
  for (int k = 0; k < 30; ++k) {
    const int n = 4 + k % 5;
    gen::RandomInstanceOptions opt;
    opt.ineligible_prob = 0.2;
    const Instance inst = gen::random_instance(n, 500 + static_cast<std::uint64_t>(k), opt);
    SolverParams p;
    p.max_drops = 1 + static_cast<int>(rng.below(3));
    if (k % 3 == 0) p.endurance = 45.0;
    const double optimum = exact_solve_tiny(inst, make_timing_model(inst, p)).completion;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      p.seed = seed;
      const double z = solve(inst, p).best.objective();
      ++runs;
      if (z < optimum - 1e-9 * std::max(1.0, optimum)) ++below;
      if (close(z, optimum, 1e-9)) ++matched;
    }
  }
  const double secs = seconds_since(t0);
  const double rate = static_cast<double>(matched) / runs;
  return {below == 0 && rate >= 0.9 && secs < 600.0,
          fmt("%d/%d runs optimal (%.1f%%), %d below optimum, %.1fs", matched, runs, 100.0 * rate, below, secs)};
}

// 3. candidate counts of the enumeration.
Verdict criterion_3() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string bad;
  for (int n = 2; n <= 10; ++n) {
    const Instance inst = gen::random_instance(n, static_cast<std::uint64_t>(n));
    SolverParams p;
    p.max_drops = n;
    const TimingModel tm = make_timing_model(inst, p);
    const Tour tour = identity_tour(n);
    const auto N = static_cast<std::uint64_t>(n);
    const std::uint64_t restricted = enumerate_split_oracle(inst, tour, tm, true).explored;
    const std::uint64_t unrestricted = enumerate_split_oracle(inst, tour, tm, false).explored;
    if (restricted != (N + 1) * (N + 2) * (N + 3) / 6 || unrestricted != (std::uint64_t{1} << (N + 2)) - N - 3) {
      ok = false;
      bad += fmt(" n=%d(%llu,%llu)", n, static_cast<unsigned long long>(restricted),
                 static_cast<unsigned long long>(unrestricted));
    }
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 60.0, (ok ? std::string("n=2..10 exact") : "mismatch" + bad) + fmt(", %.2fs", secs)};
}

// 4. monotone in D and E, split bracketed by the unrestricted optimum and the
// truck-only tour.
Verdict criterion_4() {
  const auto t0 = Clock::now();
  const std::vector<int> drops{1, 2, 4, 6, 10};
  const std::vector<std::optional<double>> ladder{20.0, 40.0, 80.0, std::nullopt};
  int heuristic_violations = 0, split_violations = 0, bracket_violations = 0;
  double worst_ratio = 0.0;
  std::string where;
  Rng rng(4);
  for (int k = 0; k < 50; ++k) {
    const Instance inst = gen::random_instance(30, 4000 + static_cast<std::uint64_t>(k));
    const Tour fixed = gen::random_tour(30, rng);
    auto params = [&](int D, std::optional<double> E) {
      SolverParams p;
      p.max_drops = D;
      p.endurance = E;
      p.seed = 1;
      return p;
    };
    auto check_heuristic = [&](double prev, double next, const std::string& step) {
      worst_ratio = std::max(worst_ratio, next / prev);
      if (next > prev * 1.02) {
        ++heuristic_violations;
        where += fmt(" [#%d %s %+.2f%%]", k, step.c_str(), 100.0 * (next / prev - 1.0));
      }
    };
    auto check_split = [&](double prev, double next) {
      if (next > prev) ++split_violations;
    };

    double prev_h = kInfinity, prev_s = kInfinity, d2_inf = 0.0;
    int prev_d = 0;
    for (int D : drops) {
      const SolverParams p = params(D, std::nullopt);
      const double h = solve(inst, p).best.objective();
      const double s = split(inst, fixed, make_timing_model(inst, p)).completion;
      if (prev_h < kInfinity) {
        check_heuristic(prev_h, h, fmt("D%d->D%d", prev_d, D));
        check_split(prev_s, s);
      }
      if (D == 2) d2_inf = h;
      prev_d = D;
      prev_h = h;
      prev_s = s;
    }
    prev_h = kInfinity;
    prev_s = kInfinity;
    for (const auto& E : ladder) {
      const SolverParams p = params(2, E);
      const double h = E ? solve(inst, p).best.objective() : d2_inf;
      const double s = split(inst, fixed, make_timing_model(inst, p)).completion;
      if (prev_h < kInfinity) {
        check_heuristic(prev_h, h, E ? fmt("E->%g", *E) : std::string("E->inf"));
        check_split(prev_s, s);
      }
      prev_h = h;
      prev_s = s;
    }

    const TimingModel tm = make_timing_model(inst, params(static_cast<int>(1 + rng.below(10)), std::nullopt));
    if (split(inst, fixed, tm).completion > truck_tour_duration(inst, fixed) + 1e-9) ++bracket_violations;
    // 12-customer companion instance, small enough for the unrestricted enumeration
    Instance sub = gen::random_instance(12, 4000 + static_cast<std::uint64_t>(k));
    const Tour small = gen::random_tour(12, rng);
    const TimingModel tms = make_timing_model(sub, params(static_cast<int>(1 + rng.below(6)), 60.0));
    const double sp = split(sub, small, tms).completion;
    const double lower = enumerate_split_oracle(sub, small, tms, false).completion;
    if (sp < lower - 1e-9 || sp > truck_tour_duration(sub, small) + 1e-9) ++bracket_violations;
  }
  const double secs = seconds_since(t0);
  return {heuristic_violations == 0 && split_violations == 0 && bracket_violations == 0 && secs < 300.0,
          fmt("heuristic >2%% rises %d (worst ratio %.4f), split rises %d, bracket violations %d, %.1fs",
              heuristic_violations, worst_ratio, split_violations, bracket_violations, secs) +
              where};
}

struct DeskRuns {
  std::vector<Instance> instances;
  std::vector<double> baselines;
  // objective[D][instance][run]
  std::map<int, std::vector<std::vector<double>>> objective;
};

double savings_of_best(const DeskRuns& d, int D, std::size_t runs) {
  double total = 0.0;
  const auto& per = d.objective.at(D);
  for (std::size_t i = 0; i < per.size(); ++i) {
    const double best = *std::min_element(per[i].begin(), per[i].begin() + static_cast<long>(runs));
    total += time_savings(d.baselines[i], best);
  }
  return total / static_cast<double>(per.size());
}

// 5 and 6. uniform n=50 instances, speed ratio 2, E unbounded.
std::vector<Verdict> criteria_5_6(bool want5, bool want6) {
  const auto t0 = Clock::now();
  constexpr int kInstances = 10;
  constexpr std::size_t kBestOf5 = 10, kBestOf6 = 3;
  DeskRuns d;
  for (int k = 1; k <= kInstances; ++k) {
    d.instances.push_back(make_uniform_instance(50, static_cast<std::uint64_t>(k)));
    d.baselines.push_back(tsp_baseline(d.instances.back(), baseline_mode_for(50)).duration);
  }
  std::map<int, std::size_t> runs;
  if (want5) runs[1] = runs[2] = kBestOf5;
  if (want6) {
    for (int D : {1, 2, 4, 6, 10}) runs[D] = std::max(runs[D], kBestOf6);
  }
  for (const auto& [D, count] : runs) {
    auto& per = d.objective[D];
    for (const Instance& inst : d.instances) {
      per.emplace_back();
      for (std::size_t r = 0; r < count; ++r) {
        SolverParams p;
        p.max_drops = D;
        p.seed = 1 + r;
        p.time_limit_s = 60.0;
        per.back().push_back(solve(inst, p).best.objective());
      }
    }
    std::fprintf(stderr, "  D=%d done at %.0fs\n", D, seconds_since(t0));
  }
  const double secs = seconds_since(t0);
  std::vector<Verdict> out;
  if (want5) {
    const double s1 = savings_of_best(d, 1, kBestOf5);
    const double s2 = savings_of_best(d, 2, kBestOf5);
    const bool ok = std::fabs(s1 - 33.1) <= 4.0 && std::fabs(s2 - 41.3) <= 4.0 && secs <= 7200.0;
    out.push_back({ok, fmt("mean savings best-of-10 D=1 %.2f%% (33.1 +/- 4), D=2 %.2f%% (41.3 +/- 4), "
                           "%d instances, %.0fs",
                           s1, s2, kInstances, secs)});
  }
  if (want6) {
    const std::vector<int> levels{1, 2, 4, 6, 10};
    std::vector<double> s;
    for (int D : levels) s.push_back(savings_of_best(d, D, kBestOf6));
    bool ok = secs <= 7200.0;
    std::string detail = "mean savings best-of-3";
    std::vector<double> inc;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      detail += fmt(" D=%d %.2f", levels[i], s[i]);
      if (i == 0) continue;
      if (s[i] < s[i - 1]) ok = false;
      inc.push_back((s[i] - s[i - 1]) / (levels[i] - levels[i - 1]));
    }
    detail += "; per-drop increments";
    for (std::size_t i = 0; i < inc.size(); ++i) {
      detail += fmt(" %.3f", inc[i]);
      if (i > 0 && !(inc[i] < inc[i - 1])) ok = false;
    }
    out.push_back({ok, detail + fmt(", %d instances, %.0fs", kInstances, secs)});
  }
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 7. identical bytes from two CLI runs.
Verdict criterion_7() {
  const auto t0 = Clock::now();
  const fs::path dir = fs::temp_directory_path() / "fstspmd_acceptance_7";
  fs::remove_all(dir);
  fs::create_directories(dir);
  int identical = 0, failed = 0;
  for (int k = 0; k < 20; ++k) {
    gen::RandomInstanceOptions opt;
    opt.ineligible_prob = 0.1;
    const Instance inst = gen::random_instance(15 + k % 11, 700 + static_cast<std::uint64_t>(k), opt);
    const fs::path file = dir / ("i" + std::to_string(k) + ".fstspmd");
    std::ofstream(file) << serialize_instance(inst);
    std::string outputs[2][2];
    for (int run = 0; run < 2; ++run) {
      const fs::path sol = dir / fmt("s%d_%d.json", k, run);
      const fs::path log = dir / fmt("l%d_%d.csv", k, run);
      const std::vector<std::string> args{"fstspmd", "solve", "--instance", file.string(), "--drops",
                                          std::to_string(1 + k % 4), "--endurance", k % 2 ? "auto" : "inf",
                                          "--seed", std::to_string(100 + k), "--out", sol.string(), "--log",
                                          log.string()};
      std::vector<const char*> argv;
      for (const auto& a : args) argv.push_back(a.c_str());
      std::ostringstream out, err;
      if (dispatch(static_cast<int>(argv.size()), argv.data(), out, err) != 0) ++failed;
      outputs[run][0] = slurp(sol);
      outputs[run][1] = slurp(log);
    }
    if (!outputs[0][0].empty() && outputs[0][0] == outputs[1][0] && outputs[0][1] == outputs[1][1]) ++identical;
  }
  fs::remove_all(dir);
  const double secs = seconds_since(t0);
  return {identical == 20 && failed == 0 && secs < 300.0,
          fmt("%d/20 instances byte-identical, %d failed runs, %.1fs", identical, failed, secs)};
}

// 8. split time ratio between n=200 and n=100, D=n, E unbounded.
Verdict criterion_8() {
  const auto t0 = Clock::now();
  auto median_time = [](int n) {
    const Instance inst = gen::random_instance(n, static_cast<std::uint64_t>(n));
    SolverParams p;  // D = n
    const TimingModel tm = make_timing_model(inst, p);
    Rng rng(static_cast<std::uint64_t>(n) * 31);
    std::vector<double> times;
    volatile double sink = 0.0;
    sink = sink + split(inst, identity_tour(n), tm).completion;  // warm-up
    for (int t = 0; t < 50; ++t) {
      const Tour tour = gen::random_tour(n, rng);
      double best = kInfinity;
      for (int rep = 0; rep < 3; ++rep) {
        const auto s = Clock::now();
        sink = sink + split(inst, tour, tm).completion;
        best = std::min(best, seconds_since(s));
      }
      times.push_back(best);
    }
    std::nth_element(times.begin(), times.begin() + 25, times.end());
    return times[25];
  };
  const double t100 = median_time(100);
  const double t200 = median_time(200);
  const double ratio = t200 / t100;
  const double secs = seconds_since(t0);
  return {ratio <= 10.0 && secs < 300.0,
          fmt("median n=100 %.3fms, n=200 %.3fms, ratio %.2f (<= 10), %.1fs", t100 * 1e3, t200 * 1e3, ratio, secs)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::vector<int> selected;
  app.add_option("--criterion", selected, "criteria to run (default: all)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8};
  const std::set<int> want(selected.begin(), selected.end());

  bool all = true;
  auto report = [&](int k, const Verdict& v) {
    std::printf("criterion %d %s: %s\n", k, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  };
  const std::map<int, std::function<Verdict()>> single{{1, criterion_1}, {2, criterion_2}, {3, criterion_3},
                                                      {4, criterion_4}, {7, criterion_7}, {8, criterion_8}};
  for (int k : want) {
    if (k == 5 || k == 6) continue;
    report(k, single.at(k)());
  }
  if (want.count(5) || want.count(6)) {
    const auto v = criteria_5_6(want.count(5) > 0, want.count(6) > 0);
    std::size_t i = 0;
    if (want.count(5)) report(5, v[i++]);
    if (want.count(6)) report(6, v[i]);
  }
  return all ? 0 : 1;
}
