#pragma once

// Figure presets: the parameter grids of the standard plots, one CSV per panel.
//
//   fig2-top, fig2-bottom  triangle, mass (log 0.005-0.05) x d_horizon (0.2-10), omega 1
//   fig3                   triangle, omega (0.1-2) x d_horizon (0.2-10), mass 0.01
//   fig4-top, fig4-bottom  line, spacing 1, mass 0.01 / 1, omega in {0.01, 0.1, 0.5, 1}
//   fig5                   line, spacing 1, mass 0.01, omega 0.01 (top) and 0.1 (bottom)
//   fig6                   line, spacing 5, mass 0.01, omega in {1, 1.5, 1.75, 2}
//   fig7                   line, spacing 5, mass 0.01, omega 2 and 2.5 (matrix elements)
//
// All use ell = 10 and zeta = 1.

#include <string>
#include <vector>

#include "harvest/config.hpp"

namespace harvest {

enum class Resolution { coarse, full };

Resolution parse_resolution(const std::string& s);

struct PresetPanel {
  std::string name;  // file stem, e.g. "fig5-top"
  std::string description;
  std::vector<RunConfig> points;
};

const std::vector<std::string>& preset_names();

// `numerics` replaces the default numerics of every point.
std::vector<PresetPanel> figure_preset(const std::string& name, Resolution resolution,
                                       const NumericsConfig& numerics = {});

// n points from lo to hi, geometric or uniform, with exact end points.
std::vector<double> grid(double lo, double hi, int n, bool log);

}  // namespace harvest
