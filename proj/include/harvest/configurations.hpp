#pragma once

// Detector layouts: equilateral triangle at a common radius, or a radial line
// with fixed proper spacing.

#include "harvest/config.hpp"
#include "harvest/correlators.hpp"

namespace harvest {

// Three detectors at R = radius_at_distance(r_h, d_horizon), angles 0, 2pi/3, 4pi/3.
DetectorConfiguration build_triangle(const BtzBackground& bg, double d_horizon, double omega);

// Common angle 0; A at d_horizon_a from the horizon, B and C `spacing` further out each.
DetectorConfiguration build_line(const BtzBackground& bg, double d_horizon_a, double spacing, double omega);

BtzBackground build_background(const RunConfig& cfg);
DetectorConfiguration build_configuration(const RunConfig& cfg);

}  // namespace harvest
