#pragma once

#include <string>

#include "fstspmd/instance.hpp"
#include "fstspmd/solution.hpp"

namespace fstspmd {

// Standalone SVG of a solution: solid polyline for the truck, one dashed
// polyline per drone sortie, labelled customers, square depot. Throws
// std::invalid_argument when the instance has no coordinates.
std::string render_route_svg(const Solution& sol, const Instance& inst);

}  // namespace fstspmd
