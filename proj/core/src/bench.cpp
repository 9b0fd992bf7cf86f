#include "fstspmd/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fstspmd/rng.hpp"
#include "fstspmd/search.hpp"

namespace fstspmd {

std::pair<double, double> delta_metrics(double ref_best, double ref_avg, double best, double avg) {
  if (!(ref_best > 0.0) || !(ref_avg > 0.0)) {
    throw std::invalid_argument("delta_metrics: reference values must be positive");
  }
  return {(ref_best - best) / ref_best * 100.0, (ref_avg - avg) / ref_avg * 100.0};
}

double time_savings(double z_tsp, double z) {
  if (!(z_tsp > 0.0)) throw std::invalid_argument("time_savings: z_tsp must be positive");
  return (z_tsp - z) / z_tsp * 100.0;
}

std::optional<double> EnduranceSetting::resolve(const Instance& inst) const {
  switch (kind) {
    case Kind::finite: return value;
    case Kind::unbounded: return std::nullopt;
    case Kind::heuristic: return endurance_heuristic(inst.drone_time, inst.n);
  }
  return std::nullopt;
}

namespace {

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument("bad " + what + ": '" + s + "'");
  return v;
}

long long to_integer(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw std::invalid_argument("bad " + what + ": '" + s + "'");
  return v;
}

bool is_inf_token(const std::string& s) { return s == "inf" || s == "unbounded"; }

}  // namespace

std::string EnduranceSetting::str() const {
  switch (kind) {
    case Kind::finite: return fmt_short(value);
    case Kind::unbounded: return "inf";
    case Kind::heuristic: return "auto";
  }
  return "?";
}

EnduranceSetting parse_endurance(const std::string& text) {
  const std::string t = trim(text);
  if (is_inf_token(t)) return EnduranceSetting::unbounded();
  if (t == "auto") return EnduranceSetting::heuristic();
  const double v = to_double(t, "endurance");
  if (!(v > 0.0)) throw std::invalid_argument("endurance must be positive");
  return EnduranceSetting::finite(v);
}

void ScenarioGrid::validate() const {
  if (instances.empty()) throw std::invalid_argument("grid: no instances");
  if (drops.empty()) throw std::invalid_argument("grid: no drop values");
  if (speed_ratios.empty()) throw std::invalid_argument("grid: no speed ratios");
  if (endurances.empty()) throw std::invalid_argument("grid: no endurance values");
  if (runs < 1) throw std::invalid_argument("grid: runs must be >= 1");
  for (const auto& d : drops) {
    if (d && *d < 1) throw std::invalid_argument("grid: drops must be >= 1");
  }
  for (const auto& r : speed_ratios) {
    if (r && !(*r > 0.0)) throw std::invalid_argument("grid: speed ratio must be positive");
  }
}

std::size_t ScenarioGrid::cells() const {
  return instances.size() * drops.size() * speed_ratios.size() * endurances.size() *
         static_cast<std::size_t>(runs);
}

ScenarioGrid parse_grid_config(std::istream& in, const std::string& base_dir) {
  ScenarioGrid g;
  std::string line;
  int lineno = 0;
  bool have_instances = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("grid config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "instances") {
      for (const auto& p : split_list(value)) {
        const std::filesystem::path path(p);
        g.instances.push_back(
            load_instance(path.is_absolute() ? p : (std::filesystem::path(base_dir) / path).string()));
      }
      have_instances = true;
    } else if (key == "drops") {
      g.drops.clear();
      for (const auto& d : split_list(value)) {
        if (is_inf_token(d)) g.drops.emplace_back(std::nullopt);
        else g.drops.emplace_back(static_cast<int>(to_integer(d, "drops")));
      }
    } else if (key == "ratios") {
      g.speed_ratios.clear();
      for (const auto& r : split_list(value)) {
        if (r == "given") g.speed_ratios.emplace_back(std::nullopt);
        else g.speed_ratios.emplace_back(to_double(r, "ratio"));
      }
    } else if (key == "endurances") {
      g.endurances.clear();
      for (const auto& e : split_list(value)) g.endurances.push_back(parse_endurance(e));
    } else if (key == "runs") {
      g.runs = static_cast<int>(to_integer(value, "runs"));
    } else if (key == "seed0") {
      g.seed0 = static_cast<std::uint64_t>(to_integer(value, "seed0"));
    } else if (key == "time_limit_s") {
      g.base.time_limit_s = to_double(value, "time_limit_s");
    } else if (key == "stop_no_improve") {
      g.base.stop_no_improve = static_cast<int>(to_integer(value, "stop_no_improve"));
    } else if (key == "launch") {
      g.base.launch_time = to_double(value, "launch");
    } else if (key == "retrieve") {
      g.base.retrieve_time = to_double(value, "retrieve");
    } else {
      throw std::invalid_argument("grid config line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
    }
  }
  if (!have_instances) throw std::invalid_argument("grid config: missing instances=");
  g.validate();
  return g;
}

ScenarioGrid load_grid_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open grid config " + path);
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_grid_config(in, dir.empty() ? "." : dir);
}

TspMode baseline_mode_for(int n) {
  return n <= kHeldKarpMaxCustomers ? TspMode::exact_dp : TspMode::heuristic;
}

std::vector<ResultRow> run_scenario_grid(const ScenarioGrid& grid, int workers) {
  grid.validate();
  const std::size_t runs = static_cast<std::size_t>(grid.runs);
  const std::size_t per_instance = grid.drops.size() * grid.speed_ratios.size() *
                                   grid.endurances.size() * runs;

  // Truck-only baselines depend on the truck matrix only.
  std::vector<TspResult> baselines;
  baselines.reserve(grid.instances.size());
  for (const Instance& inst : grid.instances) {
    baselines.push_back(tsp_baseline(inst, baseline_mode_for(inst.n), grid.base.truck_service));
  }

  std::vector<ResultRow> rows(grid.cells());
  auto run_cell = [&](std::size_t cell) {
    std::size_t rest = cell;
    const std::size_t run = rest % runs;
    rest /= runs;
    const std::size_t ei = rest % grid.endurances.size();
    rest /= grid.endurances.size();
    const std::size_t ri = rest % grid.speed_ratios.size();
    rest /= grid.speed_ratios.size();
    const std::size_t di = rest % grid.drops.size();
    const std::size_t ii = cell / per_instance;

    const Instance& source = grid.instances[ii];
    ResultRow& row = rows[cell];
    row.instance = source.name;
    row.drops = grid.drops[di];
    row.speed_ratio = grid.speed_ratios[ri];
    row.endurance = grid.endurances[ei].str();
    row.seed = grid.seed0 + run;
    row.tsp_baseline = baselines[ii].duration;
    row.baseline_mode = baseline_mode_for(source.n) == TspMode::exact_dp ? "exact_dp" : "heuristic";
    try {
      const Instance inst = row.speed_ratio ? with_speed_ratio(source, *row.speed_ratio) : source;
      SolverParams params = grid.base;
      params.max_drops = row.drops;
      params.endurance = grid.endurances[ei].resolve(inst);
      params.seed = row.seed;
      const auto start = std::chrono::steady_clock::now();
      const SolveResult result = solve(inst, params);
      row.runtime_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
      row.objective = result.best.objective();
      row.savings_pct = time_savings(row.tsp_baseline, row.objective);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const std::size_t total = rows.size();
  const int pool = std::max(1, std::min<int>(workers, static_cast<int>(total)));
  if (pool == 1) {
    for (std::size_t c = 0; c < total; ++c) run_cell(c);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(pool));
  for (int w = 0; w < pool; ++w) {
    threads.emplace_back([&] {
      for (std::size_t c = next++; c < total; c = next++) run_cell(c);
    });
  }
  for (auto& t : threads) t.join();
  return rows;
}

namespace {

const char* const kCsvHeader =
    "instance,D,speed_ratio,E,seed,objective,runtime_ms,tsp_baseline,savings_pct,baseline_mode,error";

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// One record, honouring quoted fields that span lines.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool quoted = false;
  bool any = false;
  char c = 0;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

}  // namespace

void write_results_csv(std::ostream& os, const std::vector<ResultRow>& rows, bool with_timing) {
  os << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    os << csv_field(r.instance) << ',' << (r.drops ? std::to_string(*r.drops) : "inf") << ','
       << (r.speed_ratio ? fmt6(*r.speed_ratio) : "") << ',' << csv_field(r.endurance) << ','
       << r.seed << ',' << fmt6(r.objective) << ',' << (with_timing ? fmt6(r.runtime_ms) : "")
       << ',' << fmt6(r.tsp_baseline) << ',' << fmt6(r.savings_pct) << ','
       << csv_field(r.baseline_mode) << ',' << csv_field(r.error) << '\n';
  }
  if (!os) throw std::runtime_error("write_results_csv: write failed");
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::vector<ResultRow> rows;
  std::vector<std::string> f;
  if (!read_csv_record(in, f)) throw std::invalid_argument("results csv: empty input");
  const std::size_t width = f.size();
  if (width != 11) throw std::invalid_argument("results csv: unexpected header");
  int line = 1;
  while (read_csv_record(in, f)) {
    ++line;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != width) {
      throw std::invalid_argument("results csv record " + std::to_string(line) + ": expected " +
                                  std::to_string(width) + " fields");
    }
    ResultRow r;
    r.instance = f[0];
    if (f[1] != "inf") r.drops = static_cast<int>(to_integer(f[1], "D"));
    if (!f[2].empty()) r.speed_ratio = to_double(f[2], "speed_ratio");
    r.endurance = f[3];
    r.seed = static_cast<std::uint64_t>(to_integer(f[4], "seed"));
    r.objective = to_double(f[5], "objective");
    if (!f[6].empty()) r.runtime_ms = to_double(f[6], "runtime_ms");
    r.tsp_baseline = to_double(f[7], "tsp_baseline");
    r.savings_pct = to_double(f[8], "savings_pct");
    r.baseline_mode = f[9];
    r.error = f[10];
    rows.push_back(std::move(r));
  }
  return rows;
}

Instance make_uniform_instance(int n, std::uint64_t seed, double speed_ratio, double side) {
  if (n < 1) throw std::invalid_argument("make_uniform_instance: n must be >= 1");
  Rng rng(seed);
  Instance inst;
  inst.name = "uniform-n" + std::to_string(n) + "-s" + std::to_string(seed);
  inst.n = n;
  inst.coords.resize(static_cast<std::size_t>(n) + 1);
  for (Point& p : inst.coords) {
    p.x = rng.uniform01() * side;
    p.y = rng.uniform01() * side;
  }
  inst.metric.truck_metric = TruckMetric::euclidean;
  inst.metric.drone_metric = DroneMetric::euclidean;
  inst.metric.truck_speed = 1.0;
  inst.metric.drone_speed = speed_ratio;
  auto [truck, drone] = build_matrices(inst.coords, inst.metric);
  inst.truck_time = std::move(truck);
  inst.drone_time = std::move(drone);
  inst.eligible.assign(static_cast<std::size_t>(n) + 1, true);
  inst.meta["source_format"] = "generated";
  return inst;
}

}  // namespace fstspmd
