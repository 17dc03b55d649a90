#include "harvest/presets.hpp"

#include <algorithm>
#include <cmath>

#include "harvest/errors.hpp"

namespace harvest {

namespace {

RunConfig base(const NumericsConfig& numerics, GeometryKind geometry, double mass, double spacing) {
  RunConfig c;
  c.background.ell = 10.0;
  c.background.zeta = 1;
  c.background.mass = mass;
  c.detectors.geometry = geometry;
  c.detectors.spacing = spacing;
  c.numerics = numerics;
  return c;
}

// Outer axis slowest, d_horizon fastest.
std::vector<RunConfig> product(const RunConfig& b, const std::string& outer, const std::vector<double>& outer_values,
                               const std::vector<double>& d) {
  std::vector<RunConfig> points;
  points.reserve(outer_values.size() * d.size());
  for (double o : outer_values) {
    for (double x : d) {
      RunConfig c = b;
      set_parameter(c, outer, o);
      c.detectors.d_horizon = x;
      points.push_back(c);
    }
  }
  return points;
}

PresetPanel line_panel(const std::string& name, const std::string& description, const NumericsConfig& numerics,
                       double mass, double spacing, const std::vector<double>& omegas, double d_max, int n) {
  RunConfig b = base(numerics, GeometryKind::line, mass, spacing);
  return {name, description, product(b, "omega", omegas, grid(0.01, d_max, n, true))};
}

}  // namespace

Resolution parse_resolution(const std::string& s) {
  if (s == "coarse") return Resolution::coarse;
  if (s == "full") return Resolution::full;
  throw ConfigError("resolution must be coarse or full");
}

std::vector<double> grid(double lo, double hi, int n, bool log) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    v[static_cast<std::size_t>(i)] = log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                                         : lo + t * (hi - lo);
  }
  v.front() = lo;
  if (n > 1) v.back() = hi;
  return v;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig2-top", "fig2-bottom", "fig3", "fig4-top",
                                              "fig4-bottom", "fig5", "fig6", "fig7"};
  return names;
}

std::vector<PresetPanel> figure_preset(const std::string& name, Resolution resolution,
                                       const NumericsConfig& numerics) {
  const bool full = resolution == Resolution::full;
  const int map_n = full ? 60 : 25;
  const int line_n = full ? 120 : 40;

  if (name == "fig2-top" || name == "fig2-bottom") {
    RunConfig b = base(numerics, GeometryKind::triangle, 0.01, 1.0);
    b.detectors.omega = 1.0;
    const std::string what = name == "fig2-top" ? "bipartite negativity" : "pi-tangle";
    return {{name, what + " over mass x d_horizon, triangle, omega 1",
             product(b, "mass", grid(0.005, 0.05, map_n, true), grid(0.2, 10.0, map_n, false))}};
  }
  if (name == "fig3") {
    RunConfig b = base(numerics, GeometryKind::triangle, 0.01, 1.0);
    return {{name, "pi-tangle over omega x d_horizon, triangle, mass 0.01",
             product(b, "omega", grid(0.1, 2.0, map_n, false), grid(0.2, 10.0, map_n, false))}};
  }
  if (name == "fig4-top" || name == "fig4-bottom") {
    const double mass = name == "fig4-top" ? 0.01 : 1.0;
    return {line_panel(name, "pi-tangle along a line, spacing 1, mass " + std::string(name == "fig4-top" ? "0.01" : "1"),
                       numerics, mass, 1.0, {0.01, 0.1, 0.5, 1.0}, 60.0, line_n)};
  }
  if (name == "fig5") {
    return {line_panel("fig5-top", "negativities along a line, spacing 1, omega 0.01", numerics, 0.01, 1.0, {0.01},
                       10.0, line_n),
            line_panel("fig5-bottom", "negativities along a line, spacing 1, omega 0.1", numerics, 0.01, 1.0, {0.1},
                       10.0, line_n)};
  }
  if (name == "fig6") {
    return {line_panel(name, "pi-tangle along a line, spacing 5", numerics, 0.01, 5.0, {1.0, 1.5, 1.75, 2.0}, 50.0,
                       line_n)};
  }
  if (name == "fig7") {
    return {line_panel("fig7-omega2", "negativities along a line, spacing 5, omega 2", numerics, 0.01, 5.0, {2.0},
                       3.0, line_n),
            line_panel("fig7-omega2.5", "matrix elements and negativities along a line, spacing 5, omega 2.5",
                       numerics, 0.01, 5.0, {2.5}, 3.0, line_n)};
  }
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace harvest
