#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fstspmd {

// Dense square matrix of travel times, row-major.
class TimeMatrix {
 public:
  TimeMatrix() = default;
  explicit TimeMatrix(std::size_t dim, double fill = 0.0)
      : dim_(dim), data_(dim * dim, fill) {}

  std::size_t dim() const { return dim_; }

  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * dim_ + static_cast<std::size_t>(j)];
  }
  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(i) * dim_ + static_cast<std::size_t>(j)];
  }

  const double* data() const { return data_.data(); }

  bool operator==(const TimeMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class TruckMetric { euclidean, manhattan, matrix_given };
enum class DroneMetric { euclidean, matrix_given };

struct MetricConfig {
  TruckMetric truck_metric = TruckMetric::euclidean;
  DroneMetric drone_metric = DroneMetric::euclidean;
  double truck_speed = 1.0;  // distance per time unit
  double drone_speed = 1.0;
};

std::string_view to_string(TruckMetric m);
std::string_view to_string(DroneMetric m);

// Problem data. Node 0 is the depot, 1..n the customers and n+1 a second copy
// of the depot, so both matrices are (n+2)x(n+2).
struct Instance {
  std::string name;
  int n = 0;
  std::vector<Point> coords;  // n+1 entries; empty when the source gave none
  TimeMatrix truck_time;
  TimeMatrix drone_time;
  std::vector<bool> eligible;  // n+1 entries indexed by node; depot is true
  MetricConfig metric;
  bool truck_matrix_explicit = false;
  bool drone_matrix_explicit = false;
  std::map<std::string, std::string> meta;

  int depot_end() const { return n + 1; }
  bool has_coords() const { return !coords.empty(); }
  bool is_eligible(int node) const {
    return node == 0 || node == n + 1 || eligible[static_cast<std::size_t>(node)];
  }
  const Point& location(int node) const {
    return coords[static_cast<std::size_t>(node == n + 1 ? 0 : node)];
  }
};

enum class InstanceFormat { canonical, coords_legacy };

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// coords-legacy files carry no metric header, so `legacy_metric` supplies it.
Instance parse_instance(std::istream& in, InstanceFormat format,
                        const MetricConfig& legacy_metric = {});
Instance parse_instance(std::string_view text, InstanceFormat format,
                        const MetricConfig& legacy_metric = {});

// Reads a file, picking the format from its first line. The instance name is
// the file stem.
Instance load_instance(const std::string& path, const MetricConfig& legacy_metric = {});

// Canonical text with 9 significant digits. Matrix blocks are written only for
// matrices that came from the source file.
std::string serialize_instance(const Instance& inst);

// Entry [i][j] is the metric distance between the locations of i and j divided
// by the vehicle speed; node n+1 sits on the depot. `coords` has n+1 entries.
std::pair<TimeMatrix, TimeMatrix> build_matrices(std::span<const Point> coords,
                                                 const MetricConfig& metric);

// 2/(n(n+1)) times the drone travel time summed over the ordered pairs i != j
// of the n+1 distinct locations (depot counted once), i.e. twice the mean arc.
double endurance_heuristic(const TimeMatrix& drone_time, int n);

// Identifier of the pair-set convention used by endurance_heuristic, for
// provenance records.
inline constexpr std::string_view kEndurancePairConvention =
    "2/(n(n+1)) * sum over ordered pairs i!=j of nodes 0..n";

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
  std::string str() const;
};

ValidationReport validate_instance(const Instance& inst);

// Rebuilds the drone matrix as euclidean distance / (ratio * truck speed).
// Requires coordinates.
Instance with_speed_ratio(const Instance& inst, double ratio);

}  // namespace fstspmd
