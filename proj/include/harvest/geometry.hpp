#pragma once

// Static BTZ background, hovering detectors and the hyperbolic-angle
// coefficients of the single-integral correlator forms.
//
// Units: the switching width sigma is 1, so every length is measured in
// sigma and every energy in 1/sigma.

namespace harvest {

enum class Branch { minus, plus };

inline constexpr double kPi = 3.14159265358979323846;

// Non-rotating BTZ black hole with a field boundary condition at infinity.
// zeta = 1 (Dirichlet), 0 (transparent) or -1 (Neumann).
class BtzBackground {
 public:
  BtzBackground(double ell, double mass, int zeta = 1);

  double ell() const noexcept { return ell_; }
  double mass() const noexcept { return mass_; }
  int zeta() const noexcept { return zeta_; }
  double horizon_radius() const noexcept { return r_h_; }

 private:
  double ell_;
  double mass_;
  int zeta_;
  double r_h_;
};

// A detector hovering at fixed (R, phi) with energy gap Omega.
class StaticDetector {
 public:
  StaticDetector(const BtzBackground& bg, double radius, double phi, double gap);

  double radius() const noexcept { return radius_; }
  double phi() const noexcept { return phi_; }
  double gap() const noexcept { return gap_; }
  // Redshift factor sqrt(R^2 - r_h^2) / ell.
  double gamma() const noexcept { return gamma_; }
  // Local Hartle-Hawking temperature r_h / (2 pi ell^2 gamma).
  double temperature() const noexcept { return temperature_; }

 private:
  double radius_;
  double phi_;
  double gap_;
  double gamma_;
  double temperature_;
};

// Proper radial distance on a constant-t slice, r_h <= r1 <= r2.
double proper_distance(const BtzBackground& bg, double r1, double r2);

// Inverse of proper_distance in its second argument.
double radius_at_distance(const BtzBackground& bg, double r1, double d);

// arccosh(1 + t) for t >= 0 without cancellation near t = 0 or overflow at large t.
double arccosh_one_plus(double t);

// Gaussian damping and oscillation frequency of a detector's response integrand:
// exp(-a x^2) exp(-i beta x).
struct SingleGeometry {
  double a;
  double beta;
};

SingleGeometry single_geometry(const BtzBackground& bg, const StaticDetector& det);

// Coefficients shared by the C_jk and X_jk integrals of a detector pair.
// k_plus / k_minus are per unit squared dimensionless coupling.
struct PairGeometry {
  double radius_j;
  double radius_k;
  double gamma_j;
  double gamma_k;
  double delta_phi;  // phi_j - phi_k as given
  double a;
  double beta_plus;
  double beta_minus;
  double k_plus;
  double k_minus;
};

PairGeometry pair_geometry(const BtzBackground& bg, const StaticDetector& j,
                           const StaticDetector& k);

// Singular point of the n-th image of a single detector's response:
// arccosh[(r_h^2 / gamma^2 ell^2) ((R^2 / r_h^2) cosh(2 pi n r_h / ell) +- 1)].
double alpha_single(const StaticDetector& det, const BtzBackground& bg, long n, Branch sign);

// Same for a pair, with cosh((r_h / ell)(delta_phi + 2 pi n)). Summing over all
// integers n makes the result independent of whether the image shift is
// written as +2 pi n or -2 pi n.
double alpha_pair(const PairGeometry& pg, const BtzBackground& bg, long n, Branch sign);

}  // namespace harvest
