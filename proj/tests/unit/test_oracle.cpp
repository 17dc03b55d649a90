#include <cmath>
#include <complex>

#include "doctest.h"
#include "harvest/configurations.hpp"
#include "harvest/errors.hpp"
#include "harvest/oracle.hpp"

using namespace harvest;
using cd = std::complex<double>;

TEST_CASE("Neville extrapolation is exact for polynomials") {
  const std::vector<double> h{0.04, 0.02, 0.01};
  std::vector<cd> v;
  for (double x : h) v.emplace_back(3.0 - 2.0 * x + 5.0 * x * x, 1.0 + x);
  const auto t = neville_table(h, v);
  REQUIRE(t.size() == 3);
  CHECK(std::abs(t.back().back() - cd(3.0, 1.0)) < 1e-13);
}

TEST_CASE("Wightman function is conjugate-symmetric in time") {
  BtzBackground bg(10.0, 0.01);
  WightmanEvaluator w(bg, 1.3, 1.7, 0.4, 0.02, ImageSumControls{1e-13, 0.0, 2, 100000});
  for (double dt : {0.1, 0.7, 2.5, 6.0}) {
    const cd a = w(dt), b = w(-dt);
    CHECK(std::abs(a - std::conj(b)) <= 1e-12 * std::abs(a));
    CHECK(w.time_ordered(-dt) == w(dt));
  }
  CHECK(w.epsilon() == 0.02);
}

TEST_CASE("oracle response is real and matches the fast path") {
  BtzBackground bg(10.0, 1.0);
  const double r_h = bg.horizon_radius();
  DetectorConfiguration cfg(bg, {StaticDetector(bg, radius_at_distance(bg, r_h, 1.0), 0.0, 1.0),
                                 StaticDetector(bg, radius_at_distance(bg, r_h, 2.0), 0.0, 1.0)});
  const auto rep = oracle_element(cfg, ElementKind::P, 0, 0);
  CHECK(std::abs(rep.value.imag()) < 1e-10);
  CHECK(rep.monotone);
  CHECK(rep.value.real() == doctest::Approx(0.0749452746).epsilon(1e-8));
  CHECK(agrees(fast_element(cfg, ElementKind::P, 0, 0), rep.value));
  REQUIRE(rep.table.size() == 3);
  const cd last = rep.table[2].back(), before = rep.table[1].back();
  CHECK(std::abs(last - before) < 2e-3 * std::abs(last));
}

TEST_CASE("triangle calibration selects the branch sign") {
  BtzBackground bg(10.0, 0.01);
  const auto cfg = build_triangle(bg, 2.0, 1.0);
  const auto c = compare_branches(cfg, ElementKind::C, 0, 1);
  CHECK(c.minus_agrees);
  CHECK_FALSE(c.plus_agrees);
  CHECK(kBranchSign == -1);
}

TEST_CASE("oracle X is unchanged by swapping equal-radius detectors") {
  BtzBackground bg(10.0, 0.01);
  const auto cfg = build_triangle(bg, 2.0, 1.0);
  OracleControls ctrl;
  ctrl.epsilons = {0.02};
  const cd ab = oracle_value(cfg, ElementKind::X, 0, 1, 0.02, ctrl);
  const cd ba = oracle_value(cfg, ElementKind::X, 1, 0, 0.02, ctrl);
  CHECK(std::abs(ab - ba) <= 1e-9 * std::abs(ab));
}

TEST_CASE("oracle control validation") {
  OracleControls c;
  c.epsilons = {0.02, -0.01};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.epsilons = {};
  CHECK_THROWS_AS(validate(c), ConfigError);
  CHECK(agrees(cd(1.0005), cd(1.0)));
  CHECK_FALSE(agrees(cd(1.01), cd(1.0)));
}
