#pragma once

#include "fstspmd/instance.hpp"
#include "fstspmd/tour.hpp"

namespace fstspmd {

// Truck-only tour construction and improvement on the truck matrix.

// Greedy tour starting at the depot. `first` forces the first customer when
// it is in 1..n.
Tour nearest_neighbor_tour(const Instance& inst, int first = 0);

// Segment reversal until no improving move is left. Returns the number of
// moves applied.
int two_opt(const Instance& inst, Tour& tour);

// Relocation of segments of 1..3 customers (both orientations) until no
// improving move is left. Returns the number of moves applied.
int or_opt(const Instance& inst, Tour& tour);

// Nearest neighbour from the depot and from up to 16 forced first customers,
// each polished with 2-opt and or-opt until neither applies; the shortest wins.
Tour multistart_tour(const Instance& inst);

bool truck_matrix_symmetric(const Instance& inst);

}  // namespace fstspmd
