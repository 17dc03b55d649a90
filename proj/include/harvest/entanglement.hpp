#pragma once

// Perturbative three-qubit detector states, partial transposes, negativities
// and the pi-tangle.
//
// Basis ordering (index 0-7):
//   ggg, gge, geg, egg, gee, ege, eeg, eee   (detectors A, B, C)
// and for two detectors j < k:
//   gg, ge, eg, ee.
// Negativity is the sum of the magnitudes of the negative eigenvalues of the
// partial transpose, i.e. half the trace-norm excess.

#include <array>
#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "harvest/correlators.hpp"

namespace harvest {

using ComplexMatrix = Eigen::MatrixXcd;

// Zero threshold for eigenvalues of a partial-transposed density matrix.
inline constexpr double kEigenZeroThreshold = 1e-12;

class DensityMatrix {
 public:
  // Validates dimension (4 or 8), Hermiticity and unit trace to 1e-12.
  explicit DensityMatrix(ComplexMatrix m);

  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  int parties() const noexcept { return dim() == 8 ? 3 : 2; }
  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::complex<double> operator()(int r, int c) const { return m_(r, c); }

 private:
  ComplexMatrix m_;
};

// Occupation bits of basis index i (bit parties-1-p is party p, 1 = excited).
int basis_bits(int dim, int index);
int basis_index(int dim, int bits);

// Leading-order state of three detectors at coupling lambda_tilde in (0, 0.1].
DensityMatrix assemble_rho3(const CorrelatorSet& cs, double lambda_tilde);

// Leading-order state of detectors j < k.
DensityMatrix assemble_rho2(const CorrelatorSet& cs, int j, int k, double lambda_tilde);

// Partial trace over detector `drop` (0, 1 or 2) of a three-detector state.
DensityMatrix reduce(const DensityMatrix& rho3, int drop);

// Transpose of party `subsystem`'s factor (0-based, in basis order).
ComplexMatrix partial_transpose(const ComplexMatrix& m, int subsystem);

// Sum of |eigenvalue| over eigenvalues below -kEigenZeroThreshold. Cross-checked
// against the trace-norm form; throws ConsistencyError beyond 1e-10.
double negativity(const DensityMatrix& rho, int subsystem);

// (||rho^T||_1 - 1) / 2
double trace_norm_negativity(const DensityMatrix& rho, int subsystem);

enum class NegativityMode {
  leading_order,  // exact lambda -> 0 limit: spectrum of the O(lambda^2) block
  eigen,          // eigen-decomposition at two small couplings, extrapolated
  closed_form,    // bipartite closed form; one-vs-rest only for equilateral sets
};

std::string to_string(NegativityMode mode);

// Which negativity: target versus partner, or target versus both others.
struct Bipartition {
  int target = 0;
  std::optional<int> partner;
};

struct EigenCouplings {
  double first = 1e-3;
  double second = 1.7782794100389228e-3;  // 10^-2.75
};

// Negativity per squared coupling.
double negativity_perturbative(const CorrelatorSet& cs, const Bipartition& part,
                               NegativityMode mode = NegativityMode::leading_order,
                               const EigenCouplings& couplings = {});

// max{0, sqrt((Pj - Pk)^2 / 4 + |X|^2) - (Pj + Pk) / 2}
double bipartite_closed_form(double p_j, double p_k, std::complex<double> x);

// Equilateral forms: N_A(BC) = max{0, sqrt(C^2 + 8|X|^2)/2 - C/2 - P}, N_j(k) = max{0, |X| - P}.
double equilateral_one_vs_rest(double p, double c, std::complex<double> x);
double equilateral_bipartite(double p, std::complex<double> x);
// pi per coupling^4 from the two forms above.
double equilateral_pi(double p, double c, std::complex<double> x);

// True when all P, all C and all X agree to `rel`.
bool is_equilateral(const CorrelatorSet& cs, double rel = 1e-9);

struct EntanglementReport {
  std::array<std::array<double, 3>, 3> bipartite{};  // [j][k] = N_j(k); diagonal unused
  std::array<double, 3> one_vs_rest{};               // N_A(BC), N_B(AC), N_C(AB)
  std::array<double, 3> pi_components{};             // pi_A, pi_B, pi_C
  double pi = 0.0;
  std::string method;
};

// All nine negativities (per coupling^2) and the pi-tangle (per coupling^4).
// Equilateral inputs are also checked against the closed forms to 1e-6.
EntanglementReport pi_tangle(const CorrelatorSet& cs,
                             NegativityMode mode = NegativityMode::leading_order,
                             const EigenCouplings& couplings = {});

// Non-perturbative report for an explicit three-detector state.
EntanglementReport pi_tangle(const DensityMatrix& rho3);

// N_j(k)^2 + N_j(l)^2 <= N_j(kl)^2 per detector.
std::array<bool, 3> ckw_check(const EntanglementReport& report);

}  // namespace harvest
