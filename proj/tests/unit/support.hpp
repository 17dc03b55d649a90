#pragma once

// Test-side reference integrals, written independently of src/quadrature.cpp.

#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace testing_support {

struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double z = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

// Composite 20-point Gauss-Legendre on [lo, hi] with `panels` equal panels.
inline std::complex<double> integrate(const std::function<std::complex<double>(double)>& f, double lo, double hi,
                                      int panels) {
  static const GaussLegendre gl(20);
  std::complex<double> sum{};
  const double h = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    for (std::size_t i = 0; i < gl.x.size(); ++i) sum += gl.w[i] * f(mid + 0.5 * h * gl.x[i]);
  }
  return sum * (0.5 * h);
}

// int_0^inf exp(-a x^2) w(x) / sqrt(cosh alpha - cosh x), continued past alpha as
// s i / sqrt(cosh x - cosh alpha). x = alpha -+ u^2 on either side of the singularity.
inline std::complex<double> reference_singular(double alpha, double a, const std::function<std::complex<double>(double)>& w,
                                               int s) {
  auto inner = [&](double u) -> std::complex<double> {
    const double x = alpha - u * u;
    const double diff = 2.0 * std::sinh(0.5 * (alpha + x)) * std::sinh(0.5 * u * u);
    if (u == 0.0) return 0.0;
    return 2.0 * u * std::exp(-a * x * x) * w(x) / std::sqrt(diff);
  };
  auto outer = [&](double u) -> std::complex<double> {
    const double x = alpha + u * u;
    const double diff = 2.0 * std::sinh(0.5 * (alpha + x)) * std::sinh(0.5 * u * u);
    if (u == 0.0) return 0.0;
    return std::complex<double>(0.0, s) * 2.0 * u * std::exp(-a * x * x) * w(x) / std::sqrt(diff);
  };
  std::complex<double> total{};
  if (alpha > 0.0) total += integrate(inner, 0.0, std::sqrt(alpha), 200);
  const double x_end = alpha + std::sqrt(40.0 / a) + 2.0;
  total += integrate(outer, 0.0, std::sqrt(x_end - alpha), 800);
  return total;
}

inline std::filesystem::path fresh_dir(const std::string& tag) {
  static std::mt19937_64 rng(std::random_device{}());
  auto p = std::filesystem::temp_directory_path() / ("harvest-test-" + tag + "-" + std::to_string(rng()));
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testing_support
