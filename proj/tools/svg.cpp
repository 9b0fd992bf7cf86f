#include "svg.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <vector>

namespace fstspmd {

namespace {

constexpr double kCanvas = 800.0;
constexpr double kMargin = 40.0;

struct Frame {
  double min_x, min_y, scale;

  double px(const Point& p) const { return kMargin + (p.x - min_x) * scale; }
  // svg y grows downward
  double py(const Point& p) const { return kCanvas - kMargin - (p.y - min_y) * scale; }
};

Frame fit(const Instance& inst) {
  double lo_x = inst.coords[0].x, hi_x = lo_x, lo_y = inst.coords[0].y, hi_y = lo_y;
  for (const Point& p : inst.coords) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  return {lo_x, lo_y, (kCanvas - 2 * kMargin) / span};
}

std::string points(const Frame& f, const Instance& inst, const std::vector<int>& nodes) {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Point& p = inst.location(nodes[i]);
    std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", i ? " " : "", f.px(p), f.py(p));
    out += buf;
  }
  return out;
}

}  // namespace

std::string render_route_svg(const Solution& sol, const Instance& inst) {
  if (!inst.has_coords()) {
    throw std::invalid_argument("cannot plot instance '" + inst.name + "': no coordinates");
  }
  const Frame f = fit(inst);
  std::string svg;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.0f %.0f\">\n",
                kCanvas, kCanvas, kCanvas, kCanvas);
  svg += buf;
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  std::vector<int> truck;
  for (const PlanTuple& t : sol.tuples) {
    if (truck.empty()) truck.push_back(t.launch);
    truck.insert(truck.end(), t.truck_customers.begin(), t.truck_customers.end());
    truck.push_back(t.recovery);
  }
  if (!truck.empty()) {
    svg += "<polyline class=\"truck\" fill=\"none\" stroke=\"#1f4e79\" stroke-width=\"2\" points=\"" +
           points(f, inst, truck) + "\"/>\n";
  }
  for (const PlanTuple& t : sol.tuples) {
    if (!t.flies()) continue;
    std::vector<int> sortie{t.launch};
    sortie.insert(sortie.end(), t.drone_customers.begin(), t.drone_customers.end());
    sortie.push_back(t.recovery);
    svg += "<polyline class=\"drone\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1.5\" "
           "stroke-dasharray=\"6,4\" points=\"" +
           points(f, inst, sortie) + "\"/>\n";
  }

  const Point& depot = inst.location(0);
  std::snprintf(buf, sizeof buf,
                "<rect class=\"depot\" x=\"%.2f\" y=\"%.2f\" width=\"12\" height=\"12\" fill=\"black\"/>\n",
                f.px(depot) - 6, f.py(depot) - 6);
  svg += buf;
  for (int v = 1; v <= inst.n; ++v) {
    const Point& p = inst.location(v);
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"%s\"/>\n"
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"10\" font-family=\"sans-serif\">%d</text>\n",
                  f.px(p), f.py(p), inst.is_eligible(v) ? "#555555" : "#e67e22", f.px(p) + 5,
                  f.py(p) - 5, v);
    svg += buf;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace fstspmd
