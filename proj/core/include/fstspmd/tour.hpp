#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fstspmd/instance.hpp"

namespace fstspmd {

// Giant tour: 0, a permutation of the customers 1..n, n+1.
struct Tour {
  std::vector<int> order;

  int customers() const { return static_cast<int>(order.size()) - 2; }
  std::size_t size() const { return order.size(); }
  int operator[](std::size_t pos) const { return order[pos]; }
  int& operator[](std::size_t pos) { return order[pos]; }

  bool operator==(const Tour&) const = default;
};

// Brackets a customer permutation with the two depot copies. Throws
// std::invalid_argument unless `customers` is a permutation of 1..n.
Tour make_tour(std::span<const int> customers, int n);

// Identity order 0, 1, ..., n+1.
Tour identity_tour(int n);

// Throws std::invalid_argument describing the first problem found.
void validate_tour(const Tour& tour, int n);
bool is_valid_tour(const Tour& tour, int n);

// Truck-only completion time of the tour, with an optional per-customer
// service time.
double truck_tour_duration(const Instance& inst, const Tour& tour, double truck_service = 0.0);

}  // namespace fstspmd
