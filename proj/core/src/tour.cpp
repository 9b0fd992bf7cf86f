#include "fstspmd/tour.hpp"

#include <stdexcept>
#include <string>

namespace fstspmd {

Tour make_tour(std::span<const int> customers, int n) {
  Tour t;
  t.order.reserve(static_cast<std::size_t>(n) + 2);
  t.order.push_back(0);
  t.order.insert(t.order.end(), customers.begin(), customers.end());
  t.order.push_back(n + 1);
  validate_tour(t, n);
  return t;
}

Tour identity_tour(int n) {
  Tour t;
  t.order.resize(static_cast<std::size_t>(n) + 2);
  for (int i = 0; i <= n + 1; ++i) t.order[static_cast<std::size_t>(i)] = i;
  return t;
}

void validate_tour(const Tour& tour, int n) {
  if (tour.order.size() != static_cast<std::size_t>(n) + 2) {
    throw std::invalid_argument("tour has " + std::to_string(tour.order.size()) +
                                " nodes, expected " + std::to_string(n + 2));
  }
  if (tour.order.front() != 0 || tour.order.back() != n + 1) {
    throw std::invalid_argument("tour must start at node 0 and end at node n+1");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (std::size_t p = 1; p + 1 < tour.order.size(); ++p) {
    int v = tour.order[p];
    if (v < 1 || v > n) {
      throw std::invalid_argument("tour position " + std::to_string(p) + " holds node " +
                                  std::to_string(v) + ", not a customer");
    }
    if (seen[static_cast<std::size_t>(v)]) {
      throw std::invalid_argument("customer " + std::to_string(v) + " appears twice in tour");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

bool is_valid_tour(const Tour& tour, int n) {
  try {
    validate_tour(tour, n);
    return true;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

double truck_tour_duration(const Instance& inst, const Tour& tour, double truck_service) {
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < tour.order.size(); ++p) {
    total += inst.truck_time(tour.order[p], tour.order[p + 1]);
  }
  return total + truck_service * inst.n;
}

}  // namespace fstspmd
