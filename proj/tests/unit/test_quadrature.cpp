#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "harvest/errors.hpp"
#include "harvest/geometry.hpp"
#include "harvest/quadrature.hpp"
#include "support.hpp"

using namespace harvest;
using cd = std::complex<double>;
using testing_support::reference_singular;

namespace {

cd exp_weight(double beta, double x) { return std::exp(cd(0.0, -beta * x)); }

cd single(double alpha, double a, Weight w, double beta, Part part = Part::complex, int s = kBranchSign) {
  const std::array<WeightedOutput, 1> out{{{w, beta, part}}};
  return singular_integrals(alpha, a, out, {}, s).values[0];
}

}  // namespace

TEST_CASE("fermi_gaussian limits") {
  const double sqrt_pi = std::sqrt(kPi);
  CHECK(fermi_gaussian(1e-6, 1.0) == doctest::Approx(0.5 * sqrt_pi * std::erfc(1.0)).epsilon(1e-10));
  CHECK(fermi_gaussian(1e-6, 1.0) == doctest::Approx(0.139402792640331).epsilon(1e-12));
  CHECK(fermi_gaussian(1e8, 1.0) == doctest::Approx(0.5 * sqrt_pi).epsilon(1e-7));
  CHECK(fermi_gaussian(1.0, -40.0) == doctest::Approx(sqrt_pi).epsilon(1e-12));
}

TEST_CASE("fermi_gaussian against a direct Gauss-Legendre sum") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> temp(0.05, 5.0), om(-3.0, 3.0);
  for (int i = 0; i < 30; ++i) {
    const double t = temp(rng), w = om(rng);
    auto f = [&](double x) -> cd { return std::exp(-(x - w) * (x - w)) / (std::exp(x / t) + 1.0); };
    const double ref = testing_support::integrate(f, w - 12.0, w + 12.0, 400).real();
    CHECK(fermi_gaussian(t, w) == doctest::Approx(ref).epsilon(1e-11));
  }
}

TEST_CASE("cosh difference identity") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 8.0);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = u(rng), x = u(rng);
    if (std::abs(x - alpha) <= 1e-3) continue;
    const double direct = std::cosh(alpha) - std::cosh(x);
    CHECK(cosh_difference(alpha, x) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("singular integral frozen value") {
  const cd v = single(1.0, 0.25, Weight::exponential, 1.0);
  CHECK(v.real() == doctest::Approx(0.380254802661904).epsilon(1e-10));
  CHECK(v.imag() == doctest::Approx(-1.24913377396665).epsilon(1e-10));
}

TEST_CASE("singular integrals agree with an independent reference") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> al(0.05, 4.0), aa(0.02, 3.0), bb(0.0, 4.0);
  for (int i = 0; i < 40; ++i) {
    const double alpha = al(rng), a = aa(rng), beta = bb(rng);
    for (int s : {-1, 1}) {
      const cd ref_exp = reference_singular(alpha, a, [&](double x) { return exp_weight(beta, x); }, s);
      const cd ref_cos = reference_singular(alpha, a, [&](double x) { return cd(std::cos(beta * x)); }, s);
      const cd got_exp = single(alpha, a, Weight::exponential, beta, Part::complex, s);
      const cd got_cos = single(alpha, a, Weight::cosine, beta, Part::complex, s);
      CAPTURE(alpha);
      CAPTURE(a);
      CAPTURE(beta);
      CHECK(std::abs(got_exp - ref_exp) <= 1e-8 * std::abs(ref_exp) + 1e-11);
      CHECK(std::abs(got_cos - ref_cos) <= 1e-8 * std::abs(ref_cos) + 1e-11);
    }
  }
}

TEST_CASE("branch sign flips only the continued segment") {
  const double alpha = 0.8, a = 0.3, beta = 1.4;
  const cd minus = single(alpha, a, Weight::cosine, beta, Part::complex, -1);
  const cd plus = single(alpha, a, Weight::cosine, beta, Part::complex, 1);
  // cosine weight: [0, alpha) is real, (alpha, inf) purely imaginary
  CHECK(minus.real() == doctest::Approx(plus.real()).epsilon(1e-12));
  CHECK(minus.imag() == doctest::Approx(-plus.imag()).epsilon(1e-12));
}

TEST_CASE("alpha = 0: real parts are finite, complex values rejected") {
  SingularIntegralSpec cos_spec{0.0, 0.5, 1.0, SingularIntegralSpec::Kind::cosine_real};
  CHECK(singular_oscillatory(cos_spec) == doctest::Approx(0.0).epsilon(1e-14));

  SingularIntegralSpec exp_spec{0.0, 0.5, 1.3, SingularIntegralSpec::Kind::complex_exponential_real_part};
  const cd ref = reference_singular(0.0, 0.5, [](double x) { return exp_weight(1.3, x); }, kBranchSign);
  CHECK(singular_oscillatory(exp_spec) == doctest::Approx(ref.real()).epsilon(1e-8));

  const std::array<WeightedOutput, 1> out{{{Weight::exponential, 1.0, Part::complex}}};
  CHECK_THROWS_AS(singular_integrals(0.0, 0.5, out), DomainError);
}

TEST_CASE("shared kernel outputs equal separate evaluations") {
  const std::array<WeightedOutput, 3> out{{{Weight::exponential, 2.0, Part::real},
                                           {Weight::cosine, 0.3, Part::complex},
                                           {Weight::exponential, 0.7, Part::complex}}};
  const auto r = singular_integrals(1.7, 0.4, out);
  CHECK(r.values[0].real() == doctest::Approx(single(1.7, 0.4, Weight::exponential, 2.0).real()).epsilon(1e-9));
  CHECK(r.values[0].imag() == 0.0);
  CHECK(std::abs(r.values[1] - single(1.7, 0.4, Weight::cosine, 0.3)) < 1e-9);
  CHECK(std::abs(r.values[2] - single(1.7, 0.4, Weight::exponential, 0.7)) < 1e-9);
}

TEST_CASE("large damping follows the endpoint asymptotic") {
  // a -> inf: (1 / sqrt(cosh alpha - 1)) (1/2) sqrt(pi / a)
  const double alpha = 1.0, a = 1e6;
  SingularIntegralSpec spec{alpha, a, 1.0, SingularIntegralSpec::Kind::cosine_real};
  const double asym = 0.5 * std::sqrt(kPi / a) / std::sqrt(std::cosh(alpha) - 1.0);
  CHECK(singular_oscillatory(spec) == doctest::Approx(asym).epsilon(1e-5));
  SingularIntegralSpec spec2{alpha, 4.0 * a, 1.0, SingularIntegralSpec::Kind::cosine_real};
  CHECK(singular_oscillatory(spec2) / singular_oscillatory(spec) == doctest::Approx(0.5).epsilon(1e-5));
}

TEST_CASE("subdivision cap raises ConvergenceError") {
  QuadratureControls tight{1e-15, 1e-300, 2};
  const std::array<WeightedOutput, 1> out{{{Weight::exponential, 30.0, Part::complex}}};
  CHECK_THROWS_AS(singular_integrals(3.0, 0.01, out, tight), ConvergenceError);
  CHECK_THROWS_AS(validate(QuadratureControls{0.0, 1e-14, 10}), ConfigError);
}

TEST_CASE("image sum of a geometric series") {
  const double q = std::exp(-kPi);
  ImageSumControls c{1e-14, 0.0, 1, 1000};
  auto r = image_sum<double>([&](long n) { return std::pow(q, static_cast<double>(n)); }, c, ImageRange::one_sided);
  CHECK(r.sum == doctest::Approx(q / (1.0 - q)).epsilon(1e-14));
  CHECK(r.terms <= 12);

  const double q2 = std::exp(-0.1 * kPi);
  auto r2 = image_sum<double>([&](long n) { return std::pow(q2, static_cast<double>(n)); }, c, ImageRange::one_sided);
  CHECK(r2.sum == doctest::Approx(q2 / (1.0 - q2)).epsilon(1e-13));
  CHECK(r2.terms > 80);
  CHECK(r2.terms < 130);
}

TEST_CASE("image sum edge cases") {
  ImageSumControls c{1e-12, 1e-15, 3, 100};
  auto zero = image_sum<double>([](long) { return 0.0; }, c, ImageRange::one_sided);
  CHECK(zero.sum == 0.0);
  CHECK(zero.terms == 3);

  auto two = image_sum<double>([](long n) { return std::exp(-static_cast<double>(n * n)); }, c,
                               ImageRange::two_sided);
  double ref = 1.0;
  for (int n = 1; n < 10; ++n) ref += 2.0 * std::exp(-static_cast<double>(n * n));
  CHECK(two.sum == doctest::Approx(ref).epsilon(1e-14));

  CHECK_THROWS_AS(image_sum<double>([](long) { return 1.0; }, c, ImageRange::one_sided), ConvergenceError);
  CHECK_THROWS_AS(validate(ImageSumControls{1e-10, 0.0, 0, 10}), ConfigError);
}

TEST_CASE("parallel image sum is bit-identical to serial") {
  ImageSumControls c{1e-13, 0.0, 2, 100000};
  auto term = [](long n) {
    return std::array<double, 2>{std::exp(-0.05 * std::abs(static_cast<double>(n))) * std::cos(0.3 * n),
                                 1.0 / (1.0 + static_cast<double>(n * n))  * std::exp(-0.01 * std::abs(static_cast<double>(n)))};
  };
  auto s = image_sum<std::array<double, 2>>(term, c, ImageRange::two_sided, 1, Execution::serial);
  auto p = image_sum<std::array<double, 2>>(term, c, ImageRange::two_sided, 1, Execution::parallel);
  CHECK(s.sum[0] == p.sum[0]);
  CHECK(s.sum[1] == p.sum[1]);
  CHECK(s.terms == p.terms);
}
