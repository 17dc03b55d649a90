#pragma once

// Quadrature engines for the three integral families of the static-detector
// correlators:
//
//   * the Fermi-weighted Gaussian  int dx exp(-(x - Omega)^2) / (exp(x / T) + 1),
//   * square-root-singular, Gaussian-damped, oscillatory integrals
//       int_0^inf dx exp(-a x^2) w(x) / sqrt(cosh(alpha) - cosh(x)),
//   * convergence-controlled image sums over n.
//
// Past the singular point (x > alpha) the square root is continued as
//   1 / sqrt(cosh alpha - cosh x)  ->  s * i / sqrt(cosh x - cosh alpha),
// the boundary value of the Wightman function's -i epsilon prescription.
// The sign s = kBranchSign was fixed by matching the finite-epsilon
// double-integral oracle (see docs/calibration.md).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "harvest/errors.hpp"
#include "harvest/execution.hpp"

namespace harvest {

inline constexpr int kBranchSign = -1;

struct QuadratureControls {
  double tol_rel = 1e-10;
  double tol_abs = 1e-14;
  int max_subdivisions = 20000;
};

// Validates controls; throws ConfigError.
void validate(const QuadratureControls& ctrl);

enum class Weight {
  cosine,       // cos(beta x)
  exponential,  // exp(-i beta x)
};

enum class Part {
  real,     // only the real part is integrated (finite even when alpha = 0)
  complex,  // full complex value
};

struct WeightedOutput {
  Weight weight;
  double beta;
  Part part;
};

inline constexpr std::size_t kMaxOutputs = 4;

struct SingularResult {
  std::array<std::complex<double>, kMaxOutputs> values{};
  std::array<double, kMaxOutputs> errors{};
  long evaluations = 0;
};

// Integrates exp(-a x^2) w_i(x) / sqrt(cosh alpha - cosh x) over [0, inf) for up
// to kMaxOutputs weights sharing one singular kernel. Each output meets
// max(tol_abs, tol_rel |value|) on its own.
SingularResult singular_integrals(double alpha, double a, std::span<const WeightedOutput> outputs,
                                  const QuadratureControls& ctrl = {},
                                  int branch_sign = kBranchSign);

struct SingularIntegralSpec {
  enum class Kind { cosine_real, complex_exponential_real_part };
  double alpha;
  double a;
  double beta;
  Kind kind;
};

// Real part of the singular integral described by spec.
double singular_oscillatory(const SingularIntegralSpec& spec, const QuadratureControls& ctrl = {},
                            int branch_sign = kBranchSign);

// Full complex value of the same integral (alpha > 0 required).
std::complex<double> singular_oscillatory_complex(const SingularIntegralSpec& spec,
                                                  const QuadratureControls& ctrl = {},
                                                  int branch_sign = kBranchSign);

// int_R dx exp(-sigma^2 (x - Omega)^2) / (exp(x / T) + 1), over Omega +- 9 / sigma.
double fermi_gaussian(double temperature, double omega, double sigma = 1.0,
                      const QuadratureControls& ctrl = {});

// cosh(alpha) - cosh(x) as 2 sinh((alpha + x) / 2) sinh((alpha - x) / 2).
inline double cosh_difference(double alpha, double x) {
  return 2.0 * std::sinh(0.5 * (alpha + x)) * std::sinh(0.5 * (alpha - x));
}

// ---------------------------------------------------------------------------
// Image sums

struct ImageSumControls {
  double tol_rel = 1e-10;
  double tol_abs = 1e-15;
  int consecutive_small = 2;
  long n_cap = 100000;
};

void validate(const ImageSumControls& ctrl);

enum class ImageRange {
  one_sided,  // n = first, first + 1, ...
  two_sided,  // n = 0, +-1, +-2, ...
};

template <class T>
struct ImageSumResult {
  T sum{};
  long terms = 0;  // number of n evaluated and accumulated
};

namespace detail {

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

inline bool is_small(double term_mag, double sum_mag, const ImageSumControls& c) {
  return term_mag <= c.tol_rel * sum_mag + c.tol_abs;
}

template <class T>
bool shell_small(const T& a, const T& b, const T& sum, const ImageSumControls& c) {
  if constexpr (std::is_arithmetic_v<T> || std::is_same_v<T, std::complex<double>>) {
    return is_small(magnitude(a) + magnitude(b), magnitude(sum), c);
  } else {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      if (!is_small(magnitude(a[i]) + magnitude(b[i]), magnitude(sum[i]), c)) return false;
    }
    return true;
  }
}

template <class T>
void accumulate(T& sum, const T& v) {
  if constexpr (std::is_arithmetic_v<T> || std::is_same_v<T, std::complex<double>>) {
    sum += v;
  } else {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += v[i];
  }
}

}  // namespace detail

// Accumulates term(n) outward until `consecutive_small` successive shells satisfy
// |shell| <= tol_rel |partial sum| + tol_abs. For two-sided sums a shell is the
// pair term(k) + term(-k) (k >= 1), or term(0). Vector-valued terms (std::array)
// must be small in every component.
//
// With Execution::parallel a block of shells is evaluated concurrently and then
// accumulated in order, so the result is bit-identical to the serial path.
// `term` must be safe to call concurrently.
template <class T, class Term>
ImageSumResult<T> image_sum(Term&& term, const ImageSumControls& ctrl, ImageRange range,
                            long first = 1, Execution exec = Execution::serial) {
  ImageSumResult<T> result{};
  const bool two_sided = range == ImageRange::two_sided;
  const long start = two_sided ? 0 : first;
  const long block = exec == Execution::parallel ? std::max(1, max_threads()) : 1;

  std::vector<T> pos(static_cast<std::size_t>(block));
  std::vector<T> neg(static_cast<std::size_t>(block));
  int small_run = 0;
  long shell = 0;  // index of the next shell to accumulate

  while (true) {
    if (shell > ctrl.n_cap) {
      throw ConvergenceError("image sum did not converge within n_cap = " +
                             std::to_string(ctrl.n_cap) + " terms");
    }
    const long count = std::min(block, ctrl.n_cap - shell + 1);
    auto eval = [&](long i) {
      const long k = shell + i;
      if (two_sided) {
        pos[static_cast<std::size_t>(i)] = term(k);
        neg[static_cast<std::size_t>(i)] = k == 0 ? T{} : term(-k);
      } else {
        pos[static_cast<std::size_t>(i)] = term(start + k);
      }
    };
    if (exec == Execution::parallel && count > 1) {
#pragma omp parallel for schedule(static, 1)
      for (long i = 0; i < count; ++i) eval(i);
    } else {
      for (long i = 0; i < count; ++i) eval(i);
    }

    for (long i = 0; i < count; ++i) {
      const auto& p = pos[static_cast<std::size_t>(i)];
      const auto& m = neg[static_cast<std::size_t>(i)];
      const long k = shell + i;
      detail::accumulate(result.sum, p);
      if (two_sided && k != 0) {
        detail::accumulate(result.sum, m);
        result.terms += 2;
      } else {
        result.terms += 1;
      }
      const T zero{};
      small_run = detail::shell_small(p, (two_sided && k != 0) ? m : zero, result.sum, ctrl)
                      ? small_run + 1
                      : 0;
      if (small_run >= ctrl.consecutive_small) return result;
    }
    shell += count;
  }
}

}  // namespace harvest
