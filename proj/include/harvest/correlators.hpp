#pragma once

// Leading-order density-matrix elements for static detectors with Gaussian
// switching (width 1), per squared dimensionless coupling:
//
//   P_j   detector response,
//   C_jk  pairwise detector correlation (real),
//   X_jk  pairwise nonlocal correlation (complex).
//
// The fast path evaluates each element as a thermal term plus image sums of
// single singular integrals; oracle.hpp provides the independent double
// integral over the regularized Wightman function.

#include <array>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "harvest/execution.hpp"
#include "harvest/geometry.hpp"
#include "harvest/quadrature.hpp"

namespace harvest {

struct NumericsControls {
  QuadratureControls quad{};
  ImageSumControls image{};
  int branch_sign = kBranchSign;
};

void validate(const NumericsControls& ctrl);

// Two or three static detectors sharing one gap, listed as [A, B, C].
class DetectorConfiguration {
 public:
  DetectorConfiguration(const BtzBackground& bg, std::vector<StaticDetector> detectors);

  const BtzBackground& background() const noexcept { return background_; }
  const std::vector<StaticDetector>& detectors() const noexcept { return detectors_; }
  const StaticDetector& detector(int j) const { return detectors_.at(static_cast<std::size_t>(j)); }
  int size() const noexcept { return static_cast<int>(detectors_.size()); }
  double gap() const noexcept { return detectors_.front().gap(); }

 private:
  BtzBackground background_;
  std::vector<StaticDetector> detectors_;
};

// Unordered pairs in storage order AB, AC, BC.
inline constexpr std::array<std::pair<int, int>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};

// Storage slot of the unordered pair {j, k}.
int pair_index(int j, int k);

std::string detector_name(int j);
std::string pair_name(int pair);

struct ElementDiagnostics {
  long image_terms = 0;
  double quad_error = 0.0;  // summed quadrature error estimate, per squared coupling
  long evaluations = 0;
  bool clipped = false;  // a tiny negative P was set to 0
};

struct CorrelatorSet {
  int detectors = 3;
  std::array<double, 3> P{};
  std::array<double, 3> C{};
  std::array<std::complex<double>, 3> X{};
  std::array<ElementDiagnostics, 3> p_diag{};
  std::array<ElementDiagnostics, 3> pair_diag{};
  std::vector<std::string> warnings;

  double c(int j, int k) const { return C[static_cast<std::size_t>(pair_index(j, k))]; }
  std::complex<double> x(int j, int k) const { return X[static_cast<std::size_t>(pair_index(j, k))]; }
};

double transition_probability(const DetectorConfiguration& cfg, int which,
                              const NumericsControls& ctrl = {},
                              ElementDiagnostics* diag = nullptr);

double pair_correlator_C(const DetectorConfiguration& cfg, int j, int k,
                         const NumericsControls& ctrl = {}, ElementDiagnostics* diag = nullptr);

std::complex<double> pair_correlator_X(const DetectorConfiguration& cfg, int j, int k,
                                       const NumericsControls& ctrl = {},
                                       ElementDiagnostics* diag = nullptr);

struct PairCorrelators {
  double C = 0.0;
  std::complex<double> X{};
  ElementDiagnostics diag{};
};

// C_jk and X_jk from one image sum sharing every singular kernel.
PairCorrelators pair_correlators(const DetectorConfiguration& cfg, int j, int k,
                                 const NumericsControls& ctrl = {});

// All P, C and X of a configuration. Execution::parallel distributes the
// elements over OpenMP threads; results are identical either way.
CorrelatorSet compute_correlators(const DetectorConfiguration& cfg, const NumericsControls& ctrl = {},
                                  Execution exec = Execution::parallel);

}  // namespace harvest
