#include "fstspmd/instance.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>

namespace fstspmd {

std::string_view to_string(TruckMetric m) {
  switch (m) {
    case TruckMetric::euclidean: return "euclidean";
    case TruckMetric::manhattan: return "manhattan";
    case TruckMetric::matrix_given: return "matrix-given";
  }
  return "?";
}

std::string_view to_string(DroneMetric m) {
  switch (m) {
    case DroneMetric::euclidean: return "euclidean";
    case DroneMetric::matrix_given: return "matrix-given";
  }
  return "?";
}

namespace {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

// Non-empty, non-comment lines with their 1-based line numbers.
std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto tokens = split_ws(raw);
    if (!tokens.empty()) lines.push_back({number, std::move(tokens)});
  }
  return lines;
}

std::optional<double> to_double(const std::string& tok) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

std::optional<long> to_long(const std::string& tok) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
  return v;
}

double number_or_throw(const Line& line, const std::string& tok, const char* what) {
  auto v = to_double(tok);
  if (!v || !std::isfinite(*v)) {
    throw ParseError(line.number, std::string("non-numeric ") + what + " '" + tok + "'");
  }
  return *v;
}

TruckMetric parse_truck_metric(const Line& line, const std::string& tok) {
  if (tok == "euclidean") return TruckMetric::euclidean;
  if (tok == "manhattan") return TruckMetric::manhattan;
  if (tok == "matrix-given") return TruckMetric::matrix_given;
  throw ParseError(line.number, "unknown truck metric '" + tok + "'");
}

DroneMetric parse_drone_metric(const Line& line, const std::string& tok) {
  if (tok == "euclidean") return DroneMetric::euclidean;
  if (tok == "matrix-given") return DroneMetric::matrix_given;
  throw ParseError(line.number, "unknown drone metric '" + tok + "'");
}

void expect_header(const std::vector<Line>& lines, std::size_t idx, const char* key,
                   std::size_t arity) {
  if (idx >= lines.size()) {
    throw ParseError(lines.empty() ? 1 : lines.back().number + 1,
                     std::string("malformed header: missing '") + key + "' line");
  }
  const Line& line = lines[idx];
  if (line.tokens[0] != key || line.tokens.size() != arity + 1) {
    throw ParseError(line.number, std::string("malformed header: expected '") + key + "' with " +
                                      std::to_string(arity) + " value(s)");
  }
}

Instance parse_canonical(const std::vector<Line>& lines) {
  Instance inst;
  if (lines.empty() || lines[0].tokens.size() != 2 || lines[0].tokens[0] != "FSTSPMD" ||
      lines[0].tokens[1] != "v1") {
    throw ParseError(lines.empty() ? 1 : lines[0].number,
                     "malformed header: expected 'FSTSPMD v1'");
  }
  expect_header(lines, 1, "n", 1);
  auto count = to_long(lines[1].tokens[1]);
  if (!count || *count < 0) {
    throw ParseError(lines[1].number, "malformed header: bad customer count");
  }
  if (*count == 0) throw ParseError(lines[1].number, "no customers");
  inst.n = static_cast<int>(*count);
  const int n = inst.n;

  expect_header(lines, 2, "metric", 2);
  inst.metric.truck_metric = parse_truck_metric(lines[2], lines[2].tokens[1]);
  inst.metric.drone_metric = parse_drone_metric(lines[2], lines[2].tokens[2]);

  expect_header(lines, 3, "speed", 2);
  inst.metric.truck_speed = number_or_throw(lines[3], lines[3].tokens[1], "speed");
  inst.metric.drone_speed = number_or_throw(lines[3], lines[3].tokens[2], "speed");
  if (inst.metric.truck_speed <= 0.0 || inst.metric.drone_speed <= 0.0) {
    throw ParseError(lines[3].number, "speeds must be positive");
  }

  std::vector<Point> coords(static_cast<std::size_t>(n) + 1);
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  inst.eligible.assign(static_cast<std::size_t>(n) + 1, true);
  std::optional<bool> with_coords;
  std::size_t idx = 4;
  int nodes_read = 0;
  for (; idx < lines.size() && lines[idx].tokens[0] == "node"; ++idx) {
    const Line& line = lines[idx];
    const auto& t = line.tokens;
    if (t.size() != 5 && t.size() != 3) {
      throw ParseError(line.number, "node line needs 'node <idx> <x> <y> <eligible>'");
    }
    const bool has_xy = t.size() == 5;
    if (with_coords && *with_coords != has_xy) {
      throw ParseError(line.number, "mixed node lines with and without coordinates");
    }
    with_coords = has_xy;
    auto node = to_long(t[1]);
    if (!node || *node < 0 || *node > n) {
      throw ParseError(line.number, "node index '" + t[1] + "' out of range");
    }
    auto u = static_cast<std::size_t>(*node);
    if (seen[u]) throw ParseError(line.number, "duplicate node index " + t[1]);
    seen[u] = true;
    if (has_xy) {
      coords[u] = {number_or_throw(line, t[2], "coordinate"),
                   number_or_throw(line, t[3], "coordinate")};
    }
    const std::string& flag = t.back();
    if (flag != "0" && flag != "1") {
      throw ParseError(line.number, "eligibility flag must be 0 or 1");
    }
    inst.eligible[u] = (*node == 0) || flag == "1";
    ++nodes_read;
  }
  if (nodes_read != n + 1) {
    int at = idx < lines.size() ? lines[idx].number : (lines.back().number + 1);
    throw ParseError(at, "expected " + std::to_string(n + 1) + " node lines, found " +
                             std::to_string(nodes_read));
  }

  std::optional<TimeMatrix> truck_m;
  std::optional<TimeMatrix> drone_m;
  const std::size_t dim = static_cast<std::size_t>(n) + 2;
  while (idx < lines.size()) {
    const Line& head = lines[idx];
    if (head.tokens[0] != "matrix" || head.tokens.size() != 2 ||
        (head.tokens[1] != "truck" && head.tokens[1] != "drone")) {
      throw ParseError(head.number, "unexpected line '" + head.tokens[0] + "'");
    }
    auto& target = head.tokens[1] == "truck" ? truck_m : drone_m;
    if (target) throw ParseError(head.number, "duplicate matrix block");
    TimeMatrix m(dim);
    std::size_t filled = 0;
    ++idx;
    while (filled < dim * dim) {
      if (idx >= lines.size()) {
        throw ParseError(lines.back().number + 1, "matrix block ended early");
      }
      const Line& row = lines[idx];
      if (row.tokens[0] == "matrix") throw ParseError(row.number, "matrix block ended early");
      for (const auto& tok : row.tokens) {
        if (filled == dim * dim) throw ParseError(row.number, "too many matrix entries");
        double v = number_or_throw(row, tok, "matrix entry");
        m(static_cast<int>(filled / dim), static_cast<int>(filled % dim)) = v;
        ++filled;
      }
      ++idx;
    }
    target = std::move(m);
  }

  if (*with_coords) inst.coords = std::move(coords);
  const bool need_truck = inst.metric.truck_metric == TruckMetric::matrix_given;
  const bool need_drone = inst.metric.drone_metric == DroneMetric::matrix_given;
  int last = lines.back().number;
  if (need_truck && !truck_m) throw ParseError(last, "matrix-given truck metric needs 'matrix truck'");
  if (need_drone && !drone_m) throw ParseError(last, "matrix-given drone metric needs 'matrix drone'");
  if ((!truck_m || !drone_m) && !inst.has_coords()) {
    throw ParseError(last, "coordinates are required to build metric matrices");
  }
  inst.truck_matrix_explicit = truck_m.has_value();
  inst.drone_matrix_explicit = drone_m.has_value();
  if (!truck_m || !drone_m) {
    auto [truck, drone] = build_matrices(inst.coords, inst.metric);
    if (!truck_m) truck_m = std::move(truck);
    if (!drone_m) drone_m = std::move(drone);
  }
  inst.truck_time = std::move(*truck_m);
  inst.drone_time = std::move(*drone_m);
  inst.meta["source_format"] = "canonical";
  inst.meta["truck_metric"] = std::string(to_string(inst.metric.truck_metric));
  inst.meta["drone_metric"] = std::string(to_string(inst.metric.drone_metric));
  return inst;
}

Instance parse_legacy(const std::vector<Line>& lines, const MetricConfig& metric) {
  if (metric.truck_metric == TruckMetric::matrix_given ||
      metric.drone_metric == DroneMetric::matrix_given) {
    throw ParseError(1, "coords-legacy files cannot use matrix-given metrics");
  }
  if (lines.empty()) throw ParseError(1, "no customers");
  Instance inst;
  for (const Line& line : lines) {
    if (line.tokens.size() < 2 || line.tokens.size() > 3) {
      throw ParseError(line.number, "expected '<x> <y> [label]'");
    }
    inst.coords.push_back({number_or_throw(line, line.tokens[0], "coordinate"),
                           number_or_throw(line, line.tokens[1], "coordinate")});
  }
  inst.n = static_cast<int>(inst.coords.size()) - 1;
  if (inst.n == 0) throw ParseError(lines[0].number, "no customers");
  inst.metric = metric;
  inst.eligible.assign(static_cast<std::size_t>(inst.n) + 1, true);
  auto [truck, drone] = build_matrices(inst.coords, metric);
  inst.truck_time = std::move(truck);
  inst.drone_time = std::move(drone);
  inst.meta["source_format"] = "coords-legacy";
  inst.meta["truck_metric"] = std::string(to_string(metric.truck_metric));
  inst.meta["drone_metric"] = std::string(to_string(metric.drone_metric));
  return inst;
}

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

Instance parse_instance(std::istream& in, InstanceFormat format, const MetricConfig& legacy_metric) {
  auto lines = read_lines(in);
  Instance inst = format == InstanceFormat::canonical ? parse_canonical(lines)
                                                      : parse_legacy(lines, legacy_metric);
  return inst;
}

Instance parse_instance(std::string_view text, InstanceFormat format,
                        const MetricConfig& legacy_metric) {
  std::istringstream is{std::string(text)};
  return parse_instance(is, format, legacy_metric);
}

Instance load_instance(const std::string& path, const MetricConfig& legacy_metric) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  std::string first;
  std::istringstream peek(text);
  while (std::getline(peek, first)) {
    if (first.find_first_not_of(" \t\r") != std::string::npos && first[0] != '#') break;
  }
  auto format = first.rfind("FSTSPMD", 0) == 0 ? InstanceFormat::canonical
                                                : InstanceFormat::coords_legacy;
  Instance inst = parse_instance(text, format, legacy_metric);
  inst.name = std::filesystem::path(path).stem().string();
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  std::ostringstream os;
  os << "FSTSPMD v1\n";
  os << "n " << inst.n << "\n";
  os << "metric " << to_string(inst.metric.truck_metric) << ' '
     << to_string(inst.metric.drone_metric) << "\n";
  os << "speed " << fmt9(inst.metric.truck_speed) << ' ' << fmt9(inst.metric.drone_speed) << "\n";
  for (int i = 0; i <= inst.n; ++i) {
    os << "node " << i;
    if (inst.has_coords()) {
      os << ' ' << fmt9(inst.coords[static_cast<std::size_t>(i)].x) << ' '
         << fmt9(inst.coords[static_cast<std::size_t>(i)].y);
    }
    os << ' ' << (inst.is_eligible(i) ? 1 : 0) << "\n";
  }
  auto write_block = [&](const char* label, const TimeMatrix& m) {
    os << "matrix " << label << "\n";
    for (std::size_t i = 0; i < m.dim(); ++i) {
      for (std::size_t j = 0; j < m.dim(); ++j) {
        if (j) os << ' ';
        os << fmt9(m(static_cast<int>(i), static_cast<int>(j)));
      }
      os << "\n";
    }
  };
  if (inst.truck_matrix_explicit) write_block("truck", inst.truck_time);
  if (inst.drone_matrix_explicit) write_block("drone", inst.drone_time);
  return os.str();
}

std::pair<TimeMatrix, TimeMatrix> build_matrices(std::span<const Point> coords,
                                                 const MetricConfig& metric) {
  if (coords.empty()) throw std::invalid_argument("build_matrices: no coordinates");
  if (!(metric.truck_speed > 0.0) || !(metric.drone_speed > 0.0)) {
    throw std::invalid_argument("build_matrices: speeds must be positive");
  }
  const int n = static_cast<int>(coords.size()) - 1;
  const std::size_t dim = static_cast<std::size_t>(n) + 2;
  TimeMatrix truck(dim), drone(dim);
  auto at = [&](int node) -> const Point& {
    return coords[static_cast<std::size_t>(node == n + 1 ? 0 : node)];
  };
  for (int i = 0; i <= n + 1; ++i) {
    for (int j = 0; j <= n + 1; ++j) {
      const double dx = at(i).x - at(j).x;
      const double dy = at(i).y - at(j).y;
      const double euclid = std::sqrt(dx * dx + dy * dy);
      const double manhattan = std::abs(dx) + std::abs(dy);
      truck(i, j) = (metric.truck_metric == TruckMetric::manhattan ? manhattan : euclid) /
                    metric.truck_speed;
      drone(i, j) = euclid / metric.drone_speed;
    }
  }
  return {std::move(truck), std::move(drone)};
}

double endurance_heuristic(const TimeMatrix& drone_time, int n) {
  if (n <= 0) throw std::invalid_argument("endurance_heuristic: no customers");
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i != j) sum += drone_time(i, j);
    }
  }
  return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n + 1));
}

std::string ValidationReport::str() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& v : violations) {
    out += v;
    out += '\n';
  }
  return out;
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto& v = report.violations;
  if (inst.n <= 0) {
    v.push_back("no customers");
    return report;
  }
  const std::size_t dim = static_cast<std::size_t>(inst.n) + 2;
  if (inst.has_coords() && inst.coords.size() != dim - 1) {
    v.push_back("coordinate count " + std::to_string(inst.coords.size()) + " != n+1");
  }
  if (inst.eligible.size() != dim - 1) {
    v.push_back("eligibility mask length " + std::to_string(inst.eligible.size()) + " != n+1");
  } else if (!inst.eligible[0]) {
    v.push_back("depot marked ineligible");
  }
  if (inst.metric.truck_speed <= 0.0 || inst.metric.drone_speed <= 0.0) {
    v.push_back("non-positive speed");
  }
  auto check = [&](const char* label, const TimeMatrix& m) {
    if (m.dim() != dim) {
      v.push_back(std::string(label) + " matrix dimension " + std::to_string(m.dim()) +
                  " != n+2");
      return;
    }
    bool diag = false, bad = false;
    for (int i = 0; i < static_cast<int>(dim); ++i) {
      for (int j = 0; j < static_cast<int>(dim); ++j) {
        double x = m(i, j);
        if (!std::isfinite(x) || x < 0.0) bad = true;
        if (i == j && x != 0.0) diag = true;
      }
    }
    if (diag) v.push_back(std::string(label) + " matrix: nonzero diagonal");
    if (bad) v.push_back(std::string(label) + " matrix: negative or non-finite entry");
    const int end = static_cast<int>(dim) - 1;
    if (m(0, end) != 0.0 || m(end, 0) != 0.0) {
      v.push_back(std::string(label) + " matrix: depot copies not at distance 0");
    }
  };
  check("truck", inst.truck_time);
  check("drone", inst.drone_time);
  return report;
}

Instance with_speed_ratio(const Instance& inst, double ratio) {
  if (!inst.has_coords()) {
    throw std::invalid_argument("speed ratio needs coordinates to rebuild the drone matrix");
  }
  if (!(ratio > 0.0)) throw std::invalid_argument("speed ratio must be positive");
  Instance out = inst;
  MetricConfig m;
  m.truck_metric = TruckMetric::euclidean;
  m.drone_metric = DroneMetric::euclidean;
  m.truck_speed = inst.metric.truck_speed;
  m.drone_speed = ratio * inst.metric.truck_speed;
  out.drone_time = build_matrices(inst.coords, m).second;
  out.metric.drone_metric = DroneMetric::euclidean;
  out.metric.drone_speed = m.drone_speed;
  out.drone_matrix_explicit = false;
  out.meta["speed_ratio"] = std::to_string(ratio);
  return out;
}

}  // namespace fstspmd
