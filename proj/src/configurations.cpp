#include "harvest/configurations.hpp"

#include "harvest/errors.hpp"

namespace harvest {

namespace {

constexpr double kMinLineDistance = 0.01;

}  // namespace

DetectorConfiguration build_triangle(const BtzBackground& bg, double d_horizon, double omega) {
  if (!(d_horizon > 0.0)) throw DomainError("triangle: d_horizon must be > 0");
  const double r = radius_at_distance(bg, bg.horizon_radius(), d_horizon);
  std::vector<StaticDetector> dets;
  for (int i = 0; i < 3; ++i) dets.emplace_back(bg, r, 2.0 * kPi * i / 3.0, omega);
  return DetectorConfiguration(bg, std::move(dets));
}

DetectorConfiguration build_line(const BtzBackground& bg, double d_horizon_a, double spacing, double omega) {
  if (!(d_horizon_a >= kMinLineDistance)) throw DomainError("line: d_horizon_A must be >= 0.01");
  if (!(spacing > 0.0)) throw DomainError("line: spacing must be > 0");
  const double ra = radius_at_distance(bg, bg.horizon_radius(), d_horizon_a);
  const double rb = radius_at_distance(bg, ra, spacing);
  const double rc = radius_at_distance(bg, rb, spacing);
  std::vector<StaticDetector> dets{{bg, ra, 0.0, omega}, {bg, rb, 0.0, omega}, {bg, rc, 0.0, omega}};
  return DetectorConfiguration(bg, std::move(dets));
}

BtzBackground build_background(const RunConfig& cfg) {
  return BtzBackground(cfg.background.ell, cfg.background.mass, cfg.background.zeta);
}

DetectorConfiguration build_configuration(const RunConfig& cfg) {
  const BtzBackground bg = build_background(cfg);
  if (cfg.detectors.geometry == GeometryKind::triangle) {
    return build_triangle(bg, cfg.detectors.d_horizon, cfg.detectors.omega);
  }
  return build_line(bg, cfg.detectors.d_horizon, cfg.detectors.spacing, cfg.detectors.omega);
}

}  // namespace harvest
