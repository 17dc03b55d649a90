#include <clocale>
#include <locale>
#include <sstream>

#include "doctest.h"
#include "harvest/csv.hpp"
#include "harvest/errors.hpp"
#include "harvest/pipeline.hpp"
#include "support.hpp"

using namespace harvest;

namespace {

RunConfig triangle(double mass, double d) {
  RunConfig cfg{};
  cfg.background.mass = mass;
  cfg.detectors.d_horizon = d;
  return cfg;
}

PointOptions no_cache() {
  PointOptions o;
  o.use_cache = false;
  return o;
}

}  // namespace

TEST_CASE("triangle points on either side of the mass threshold") {
  const auto light = run_point(triangle(0.01, 2.0), no_cache());
  CHECK(light.status == PointStatus::ok);
  CHECK(light.report.pi > 0.0);
  const auto heavy = run_point(triangle(0.03, 2.0), no_cache());
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k)
      if (j != k) CHECK(heavy.report.bipartite[j][k] <= 1e-12);
}

TEST_CASE("cache hit returns a bit-identical record") {
  PointOptions opts;
  opts.cache_dir = testing_support::fresh_dir("point");
  const auto cold = run_point(triangle(0.02, 1.3), opts);
  const auto warm = run_point(triangle(0.02, 1.3), opts);
  CHECK_FALSE(cold.cache_hit);
  CHECK(warm.cache_hit);
  CHECK(csv_row(cold) == csv_row(warm));
  CHECK(csv_row(cold) == csv_row(run_point(triangle(0.02, 1.3), no_cache())));
  std::filesystem::remove_all(opts.cache_dir);
}

TEST_CASE("sweep specs") {
  const auto s = parse_sweep("mass:0.005:0.05:4:log");
  CHECK(s.parameter == "mass");
  CHECK(s.log);
  const auto v = s.values();
  REQUIRE(v.size() == 4);
  CHECK(v.front() == 0.005);
  CHECK(v.back() == 0.05);
  CHECK(v[1] / v[0] == doctest::Approx(v[2] / v[1]));
  CHECK_FALSE(parse_sweep("omega:0.1:2:5").log);
  CHECK(parse_sweep("omega:0.1:2:5:linear").values()[1] == doctest::Approx(0.575));
  CHECK_THROWS_AS(parse_sweep("omega:0.1:2"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("zeta:0:1:3"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("omega:2:1:3"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("omega:0.1:2:1"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("omega:0:2:3:log"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("omega:0.1:2:x"), ConfigError);
  CHECK_THROWS_AS(parse_sweep("omega:0.1:2:3:cubic"), ConfigError);

  const auto pts = sweep_points(RunConfig{}, {parse_sweep("mass:0.01:0.02:2"), parse_sweep("d_horizon:1:3:3")});
  REQUIRE(pts.size() == 6);
  CHECK(pts[0].background.mass == 0.01);
  CHECK(pts[2].background.mass == 0.01);
  CHECK(pts[3].background.mass == 0.02);
  CHECK(pts[1].detectors.d_horizon == 2.0);
}

TEST_CASE("sweep of fifty points gives fifty rows") {
  const auto pts = sweep_points(triangle(0.01, 1.0), {parse_sweep("d_horizon:0.5:8:50:log")});
  SweepOptions opts;
  opts.point = no_cache();
  const auto rows = run_sweep(pts, opts);
  CHECK(rows.size() == 50);
  CHECK(all_ok(rows));
  std::istringstream in(to_csv(rows));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  CHECK(n == 51);
}

TEST_CASE("worker count and cache do not change the CSV bytes") {
  RunConfig base{};
  base.detectors.geometry = GeometryKind::line;
  base.detectors.omega = 0.5;
  const auto pts = sweep_points(base, {parse_sweep("d_horizon:0.01:3:6:log")});
  SweepOptions one;
  one.point = no_cache();
  SweepOptions two = one;
  two.workers = 2;
  const auto a = to_csv(run_sweep(pts, one));
  CHECK(a == to_csv(run_sweep(pts, two)));

  SweepOptions cached = two;
  cached.point.use_cache = true;
  cached.point.cache_dir = testing_support::fresh_dir("sweep");
  CHECK(a == to_csv(run_sweep(pts, cached)));
  CHECK(a == to_csv(run_sweep(pts, cached)));
  std::filesystem::remove_all(cached.point.cache_dir);
}

TEST_CASE("numerical failures become status rows") {
  RunConfig cfg = triangle(0.01, 1.0);
  cfg.numerics.controls.image.n_cap = 2;
  SweepOptions opts;
  opts.point = no_cache();
  const auto rows = run_sweep({cfg, triangle(0.01, 1.0)}, opts);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].status == PointStatus::converge_fail);
  CHECK_FALSE(rows[0].error.empty());
  CHECK(rows[1].status == PointStatus::ok);
  CHECK_FALSE(all_ok(rows));
  const auto row = csv_row(rows[0]);
  CHECK(row.find(",,,,") != std::string::npos);
  CHECK(row.substr(row.rfind(',') + 1) == "converge_fail");
  CHECK_THROWS_AS(run_point(cfg, no_cache()), ConvergenceError);
}

TEST_CASE("invalid grid points are rejected before any work") {
  RunConfig base{};
  base.detectors.geometry = GeometryKind::line;
  const auto pts = sweep_points(base, {parse_sweep("d_horizon:0.001:1:3:log")});
  CHECK_THROWS_AS(run_sweep(pts), ConfigError);
}

TEST_CASE("csv layout") {
  const auto cols = csv_columns();
  CHECK(cols.size() == 36);
  CHECK(cols.front() == "geometry");
  CHECK(cols.back() == "status");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-300) == "1e-300");
  CHECK(format_double(-2.5) == "-2.5");

  const auto r = run_point(triangle(0.01, 2.0), no_cache());
  const auto header = to_csv({r}).substr(0, to_csv({r}).find('\n'));
  CHECK(header.rfind("geometry,ell,mass,zeta,omega,d_horizon,spacing,R_A", 0) == 0);
  std::ostringstream sub;
  write_csv(sub, {r}, {"P_A", "pi"});
  CHECK(sub.str().rfind("P_A,pi\n", 0) == 0);
  CHECK_THROWS_AS(write_csv(sub, {r}, {"P_D"}), ConfigError);
  const auto j = point_json(r);
  CHECK(j["P_A"].get<double>() == r.correlators.P[0]);
  CHECK(j["spacing"].is_null());
  CHECK(j["status"] == "ok");
}

TEST_CASE("csv output ignores the global locale") {
  const auto r = run_point(triangle(0.01, 2.0), no_cache());
  const std::string before = csv_row(r);
  const char* names[] = {"de_DE.UTF-8", "fr_FR.UTF-8", "C.UTF-8"};
  for (const char* n : names) {
    try {
      std::locale::global(std::locale(n));
      std::setlocale(LC_ALL, n);
    } catch (const std::runtime_error&) {
      continue;
    }
    CHECK(csv_row(r) == before);
  }
  std::locale::global(std::locale::classic());
  std::setlocale(LC_ALL, "C");
}
