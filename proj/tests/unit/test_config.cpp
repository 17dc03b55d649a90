#include <cmath>
#include <fstream>

#include "doctest.h"
#include "harvest/config.hpp"
#include "harvest/configurations.hpp"
#include "harvest/errors.hpp"
#include "support.hpp"

using namespace harvest;
using json = nlohmann::json;

TEST_CASE("empty config gives the defaults") {
  const auto cfg = parse_config(json::object());
  CHECK(cfg.background.ell == 10.0);
  CHECK(cfg.background.mass == 0.01);
  CHECK(cfg.background.zeta == 1);
  CHECK(cfg.detectors.geometry == GeometryKind::triangle);
  CHECK(cfg.numerics.negativity == NegativityMode::leading_order);
  CHECK(cfg.numerics.controls.branch_sign == -1);
  CHECK(cfg.output.format == "csv");
}

TEST_CASE("unknown keys and bad values are rejected") {
  CHECK_THROWS_AS(parse_config(json{{"backgrond", json::object()}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"background", {{"mas", 0.1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"numerics", {{"tolerance", 1e-8}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"background", {{"mass", "heavy"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"background", {{"mass", -1.0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"detectors", {{"geometry", "square"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"numerics", {{"negativity", "exact"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"numerics", {{"lambda_eval", 0.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"numerics", {{"branch_sign", 0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"output", {{"format", "xml"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"detectors", {{"geometry", "line"}}}, {"numerics", {{"negativity", "closed_form"}}}}),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
}

TEST_CASE("config round trip through JSON and disk") {
  json j = {{"background", {{"ell", 12.0}, {"mass", 0.3}, {"zeta", 0}}},
            {"detectors", {{"omega", 1.75}, {"geometry", "line"}, {"d_horizon", 0.2}, {"spacing", 5.0}}},
            {"numerics", {{"quad_tol_rel", 1e-9}, {"image_n_cap", 5000}, {"negativity", "eigen"}}},
            {"output", {{"format", "json"}}}};
  const auto cfg = parse_config(j);
  CHECK(cfg.background.zeta == 0);
  CHECK(cfg.detectors.spacing == 5.0);
  CHECK(cfg.numerics.controls.image.n_cap == 5000);
  CHECK(to_json(parse_config(to_json(cfg))) == to_json(cfg));

  const auto dir = testing_support::fresh_dir("config");
  const auto path = dir / "run.json";
  std::ofstream(path) << j.dump(2);
  CHECK(to_json(load_config(path)) == to_json(cfg));
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweepable parameters") {
  RunConfig cfg{};
  for (const auto& name : sweepable_parameters()) {
    set_parameter(cfg, name, 0.75);
    CHECK(get_parameter(cfg, name) == 0.75);
  }
  CHECK_THROWS_AS(set_parameter(cfg, "zeta", 0.0), ConfigError);
  CHECK_THROWS_AS(get_parameter(cfg, "branch_sign"), ConfigError);
}

TEST_CASE("detector layouts") {
  BtzBackground bg(10.0, 0.01);
  const auto tri = build_triangle(bg, 1.0, 1.0);
  for (int j = 0; j < 3; ++j) CHECK(tri.detector(j).radius() == doctest::Approx(1.005004).epsilon(1e-6));
  CHECK(tri.detector(1).phi() - tri.detector(0).phi() == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-15));
  CHECK(tri.detector(2).phi() - tri.detector(1).phi() == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-15));

  const auto line = build_line(bg, 1.0, 1.0, 1.0);
  CHECK(line.detector(0).radius() == doctest::Approx(1.005004).epsilon(1e-5));
  // r_h = 1, ell = 10: R = cosh(d / ell) along the line
  CHECK(line.detector(1).radius() == doctest::Approx(std::cosh(0.2)).epsilon(1e-12));
  CHECK(line.detector(2).radius() == doctest::Approx(std::cosh(0.3)).epsilon(1e-12));
  CHECK(proper_distance(bg, line.detector(0).radius(), line.detector(1).radius()) == doctest::Approx(1.0));
  CHECK(proper_distance(bg, line.detector(1).radius(), line.detector(2).radius()) == doctest::Approx(1.0));
  CHECK(line.detector(0).gamma() < line.detector(1).gamma());
  CHECK(line.detector(1).gamma() < line.detector(2).gamma());
  for (int j = 0; j < 3; ++j) CHECK(line.detector(j).phi() == 0.0);

  CHECK_THROWS_AS(build_line(bg, 0.005, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(build_line(bg, 1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(build_triangle(bg, 0.0, 1.0), DomainError);
}
