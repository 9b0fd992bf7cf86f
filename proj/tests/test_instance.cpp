#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <string>

#include "fstspmd/instance.hpp"
#include "fstspmd/rng.hpp"
#include "generators.hpp"

using namespace fstspmd;

namespace {

const char* kLine2 =
    "FSTSPMD v1\n"
    "n 2\n"
    "metric euclidean euclidean\n"
    "speed 1 2\n"
    "node 0 0 0 1\n"
    "node 1 1 0 1\n"
    "node 2 2 0 1\n";

bool has_violation(const ValidationReport& r, const std::string& needle) {
  for (const auto& v : r.violations) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

// Round to the 9 significant digits the serializer writes.
double nine_digits(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

}  // namespace

TEST(ParseInstance, CanonicalLine) {
  const Instance inst = parse_instance(std::string_view(kLine2), InstanceFormat::canonical);
  EXPECT_EQ(inst.n, 2);
  EXPECT_DOUBLE_EQ(inst.truck_time(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(inst.drone_time(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(inst.truck_time(2, 3), 2.0);
  EXPECT_DOUBLE_EQ(inst.truck_time(0, 3), 0.0);
  EXPECT_EQ(inst.truck_time.dim(), 4u);
  EXPECT_EQ(inst.meta.at("source_format"), "canonical");
  EXPECT_TRUE(validate_instance(inst).ok());
}

TEST(ParseInstance, ZeroCustomers) {
  const std::string text = "FSTSPMD v1\nn 0\nmetric euclidean euclidean\nspeed 1 1\nnode 0 0 0 1\n";
  try {
    parse_instance(std::string_view(text), InstanceFormat::canonical);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("no customers"), std::string::npos);
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(ParseInstance, ErrorsNameTheLine) {
  std::string dup = kLine2;
  dup.replace(dup.find("node 2"), 6, "node 1");
  try {
    parse_instance(std::string_view(dup), InstanceFormat::canonical);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 7);
    EXPECT_NE(std::string(e.what()).find("duplicate node index"), std::string::npos);
  }

  std::string bad_num = kLine2;
  bad_num.replace(bad_num.find("node 1 1 0"), 10, "node 1 x 0");
  try {
    parse_instance(std::string_view(bad_num), InstanceFormat::canonical);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 6);
    EXPECT_NE(std::string(e.what()).find("non-numeric coordinate"), std::string::npos);
  }

  std::string bad_head = kLine2;
  bad_head.replace(0, 10, "FSTSP v9");
  EXPECT_THROW(parse_instance(std::string_view(bad_head), InstanceFormat::canonical), ParseError);
}

TEST(ParseInstance, EligibilityFlags) {
  std::string text = kLine2;
  text.replace(text.find("node 2 2 0 1"), 12, "node 2 2 0 0");
  const Instance inst = parse_instance(std::string_view(text), InstanceFormat::canonical);
  EXPECT_TRUE(inst.is_eligible(1));
  EXPECT_FALSE(inst.is_eligible(2));
  EXPECT_TRUE(inst.is_eligible(0));
  EXPECT_TRUE(inst.is_eligible(3));
}

TEST(ParseInstance, CoordsLegacy) {
  MetricConfig m;
  m.truck_metric = TruckMetric::manhattan;
  m.drone_speed = 2.0;
  const Instance inst =
      parse_instance(std::string_view("0 0 depot\n3 4 a\n# comment\n6 8\n"), InstanceFormat::coords_legacy, m);
  EXPECT_EQ(inst.n, 2);
  EXPECT_DOUBLE_EQ(inst.truck_time(0, 1), 7.0);
  EXPECT_DOUBLE_EQ(inst.drone_time(0, 1), 2.5);
  EXPECT_DOUBLE_EQ(inst.truck_time(2, 3), 14.0);
  EXPECT_TRUE(inst.is_eligible(2));
  EXPECT_THROW(parse_instance(std::string_view("0 0\n"), InstanceFormat::coords_legacy), ParseError);
}

TEST(BuildMatrices, MetricArithmetic) {
  const std::vector<Point> pts{{0, 0}, {3, 4}};
  MetricConfig m;
  auto [t, d] = build_matrices(pts, m);
  EXPECT_DOUBLE_EQ(t(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(t(1, 2), 5.0);
  m.truck_metric = TruckMetric::manhattan;
  m.drone_speed = 2.0;
  auto [t2, d2] = build_matrices(pts, m);
  EXPECT_DOUBLE_EQ(t2(0, 1), 7.0);
  EXPECT_DOUBLE_EQ(d2(0, 1), 2.5);
  EXPECT_DOUBLE_EQ(d2(2, 0), 0.0);
}

TEST(BuildMatrices, TriangleInequality) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    gen::RandomInstanceOptions opt;
    opt.manhattan_truck = seed % 2 == 0;
    const Instance inst = gen::random_instance(8, seed, opt);
    const int dim = inst.n + 2;
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        for (int k = 0; k < dim; ++k) {
          ASSERT_LE(inst.truck_time(i, k), inst.truck_time(i, j) + inst.truck_time(j, k) + 1e-9);
          ASSERT_LE(inst.drone_time(i, k), inst.drone_time(i, j) + inst.drone_time(j, k) + 1e-9);
        }
      }
    }
  }
}

TEST(Serialize, MatrixGivenRoundTrip) {
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(7));
    Instance inst;
    inst.name = "m";
    inst.n = n;
    inst.metric.truck_metric = TruckMetric::matrix_given;
    inst.metric.drone_metric = DroneMetric::matrix_given;
    const int dim = n + 2;
    inst.truck_time = TimeMatrix(static_cast<std::size_t>(dim));
    inst.drone_time = TimeMatrix(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) {
        const bool depot_pair = (i == 0 || i == n + 1) && (j == 0 || j == n + 1);
        if (i == j || depot_pair) continue;
        inst.truck_time(i, j) = nine_digits(rng.uniform01() * 1000.0);
        inst.drone_time(i, j) = nine_digits(rng.uniform01() * 500.0);
      }
    }
    inst.eligible.assign(static_cast<std::size_t>(n) + 1, true);
    for (int v = 1; v <= n; ++v) inst.eligible[static_cast<std::size_t>(v)] = rng.bernoulli(0.7);
    inst.truck_matrix_explicit = inst.drone_matrix_explicit = true;
    ASSERT_TRUE(validate_instance(inst).ok()) << validate_instance(inst).str();

    const std::string text = serialize_instance(inst);
    const Instance back = parse_instance(std::string_view(text), InstanceFormat::canonical);
    EXPECT_EQ(back.truck_time, inst.truck_time);
    EXPECT_EQ(back.drone_time, inst.drone_time);
    EXPECT_EQ(back.eligible, inst.eligible);
    EXPECT_EQ(serialize_instance(back), text);
  }
}

TEST(Serialize, CoordinateInstanceIsIdempotent) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = gen::random_instance(6, seed, {100.0, 2.0, 0.3, false});
    const std::string once = serialize_instance(inst);
    const Instance back = parse_instance(std::string_view(once), InstanceFormat::canonical);
    EXPECT_EQ(serialize_instance(back), once);
    EXPECT_EQ(back.eligible, inst.eligible);
    EXPECT_FALSE(back.truck_matrix_explicit);
  }
}

TEST(EnduranceHeuristic, Formula) {
  Instance inst = gen::line_instance(2);
  TimeMatrix ones(4, 1.0);
  for (int i = 0; i < 4; ++i) ones(i, i) = 0.0;
  EXPECT_DOUBLE_EQ(endurance_heuristic(ones, 2), 2.0);
  EXPECT_DOUBLE_EQ(endurance_heuristic(TimeMatrix(4, 0.0), 2), 0.0);
  EXPECT_THROW(endurance_heuristic(TimeMatrix(2, 0.0), 0), std::invalid_argument);

  const Instance r = gen::random_instance(5, 17);
  // each unordered pair counts in both directions
  double unordered = 0.0;
  for (int i = 0; i <= 5; ++i) {
    for (int j = i + 1; j <= 5; ++j) unordered += std::hypot(r.coords[i].x - r.coords[j].x,
                                                             r.coords[i].y - r.coords[j].y) / 2.0;
  }
  EXPECT_NEAR(endurance_heuristic(r.drone_time, 5), 2.0 / (5.0 * 6.0) * 2.0 * unordered, 1e-9);
}

TEST(ValidateInstance, Violations) {
  Instance inst = gen::line_instance(3);
  EXPECT_TRUE(validate_instance(inst).ok());

  Instance diag = inst;
  diag.truck_time(2, 2) = 0.5;
  EXPECT_TRUE(has_violation(validate_instance(diag), "nonzero diagonal"));

  Instance mask = inst;
  mask.eligible.pop_back();
  EXPECT_TRUE(has_violation(validate_instance(mask), "eligibility mask length"));

  Instance neg = inst;
  neg.drone_time(1, 2) = -1.0;
  EXPECT_TRUE(has_violation(validate_instance(neg), "negative"));

  Instance copy = inst;
  copy.truck_time(0, 4) = 1.0;
  EXPECT_TRUE(has_violation(validate_instance(copy), "depot copies"));
}

TEST(ValidateInstance, RelabelingKeepsReport) {
  Rng rng(5);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = gen::random_instance(6, seed, {100.0, 2.0, 0.3, false});
    if (seed % 3 == 0) inst.truck_time(3, 3) = 1.0;
    const Tour perm = gen::random_tour(6, rng);  // perm[new] = old
    Instance re = inst;
    for (int a = 0; a <= 7; ++a) {
      for (int b = 0; b <= 7; ++b) {
        re.truck_time(a, b) = inst.truck_time(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
        re.drone_time(a, b) = inst.drone_time(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)]);
      }
    }
    for (int v = 1; v <= 6; ++v) {
      re.eligible[static_cast<std::size_t>(v)] = inst.eligible[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])];
    }
    EXPECT_EQ(validate_instance(re).ok(), validate_instance(inst).ok());
    EXPECT_EQ(validate_instance(re).violations.size(), validate_instance(inst).violations.size());
  }
}

TEST(WithSpeedRatio, RebuildsDrone) {
  const Instance inst = gen::line_instance(2);
  const Instance fast = with_speed_ratio(inst, 4.0);
  EXPECT_DOUBLE_EQ(fast.drone_time(0, 2), 0.5);
  EXPECT_EQ(fast.truck_time, inst.truck_time);
  Instance bare = inst;
  bare.coords.clear();
  EXPECT_THROW(with_speed_ratio(bare, 2.0), std::invalid_argument);
}
