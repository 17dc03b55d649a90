#include "harvest/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "harvest/errors.hpp"

namespace harvest {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

// Horizon guard for hovering detectors.
constexpr double kHorizonGuard = 1e-12;

// Beyond this half-angle sinh^2 would overflow; switch to logarithms.
constexpr double kLogDomainHalfAngle = 300.0;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

// arccosh of the image-sum argument for radii (rj, rk), redshifts (gj, gk)
// and hyperbolic image angle theta. The argument minus one is assembled from
// non-negative pieces so the minus branch of a detector with itself is exactly 0.
double image_alpha(double rj, double rk, double gj, double gk, double r_h, double ell,
                   double theta, Branch sign) {
  const double q = ell * ell * gj * gk;
  const double p = rj * rk - r_h * r_h;
  const double half = 0.5 * std::abs(theta);
  if (half > kLogDomainHalfAngle) {
    const double ln_sinh = half - kLn2 + std::log1p(-std::exp(-2.0 * half));
    const double ln_t = std::log(2.0 * rj * rk) + 2.0 * ln_sinh - std::log(q);
    return kLn2 + ln_t;
  }
  const double dr = rj - rk;
  const double p_minus_q = r_h * r_h * dr * dr / (p + q);
  const double sh = std::sinh(half);
  double numerator = 2.0 * rj * rk * sh * sh + p_minus_q;
  if (sign == Branch::plus) numerator += 2.0 * r_h * r_h;
  return arccosh_one_plus(numerator / q);
}

}  // namespace

BtzBackground::BtzBackground(double ell, double mass, int zeta)
    : ell_(ell), mass_(mass), zeta_(zeta), r_h_(0.0) {
  require_finite(ell, "ell");
  require_finite(mass, "mass");
  if (!(ell > 0.0)) throw DomainError("AdS length ell must be positive");
  if (!(mass > 0.0)) throw DomainError("black hole mass must be positive");
  if (zeta < -1 || zeta > 1) throw DomainError("boundary condition zeta must be -1, 0 or 1");
  r_h_ = ell * std::sqrt(mass);
}

StaticDetector::StaticDetector(const BtzBackground& bg, double radius, double phi, double gap)
    : radius_(radius), phi_(phi), gap_(gap), gamma_(0.0), temperature_(0.0) {
  require_finite(radius, "detector radius");
  require_finite(phi, "detector angle");
  require_finite(gap, "detector gap");
  const double r_h = bg.horizon_radius();
  if (!(radius > r_h * (1.0 + kHorizonGuard))) {
    throw DomainError("detector radius must lie outside the horizon (R > r_h)");
  }
  if (phi < 0.0 || phi >= 2.0 * kPi) throw DomainError("detector angle must lie in [0, 2pi)");
  gamma_ = std::sqrt((radius - r_h) * (radius + r_h)) / bg.ell();
  temperature_ = r_h / (2.0 * kPi * bg.ell() * bg.ell() * gamma_);
}

double proper_distance(const BtzBackground& bg, double r1, double r2) {
  const double r_h = bg.horizon_radius();
  if (!(r1 >= r_h) || !(r2 >= r_h)) throw DomainError("proper_distance: radius inside horizon");
  if (r1 > r2) throw DomainError("proper_distance: requires r1 <= r2");
  const double u1 = r1 + std::sqrt((r1 - r_h) * (r1 + r_h));
  const double u2 = r2 + std::sqrt((r2 - r_h) * (r2 + r_h));
  return bg.ell() * std::log(u2 / u1);
}

double radius_at_distance(const BtzBackground& bg, double r1, double d) {
  const double r_h = bg.horizon_radius();
  if (!(r1 >= r_h)) throw DomainError("radius_at_distance: radius inside horizon");
  if (!(d >= 0.0) || !std::isfinite(d)) throw DomainError("radius_at_distance: d must be >= 0");
  const double u1 = r1 + std::sqrt((r1 - r_h) * (r1 + r_h));
  const double u2 = u1 * std::exp(d / bg.ell());
  return 0.5 * (u2 + r_h * r_h / u2);
}

double arccosh_one_plus(double t) {
  if (std::isnan(t)) throw DomainError("arccosh of NaN");
  if (t < 0.0) {
    // Tolerate roundoff below the branch point; anything else is misuse.
    if (t > -1e-12) return 0.0;
    throw DomainError("arccosh argument below 1");
  }
  if (t > 1e150) return kLn2 + std::log(t);
  return std::log1p(t + std::sqrt(t * (t + 2.0)));
}

SingleGeometry single_geometry(const BtzBackground& bg, const StaticDetector& det) {
  const double ell2 = bg.ell() * bg.ell();
  const double r_h = bg.horizon_radius();
  const double g = ell2 * det.gamma() / r_h;
  return {0.25 * g * g, g * det.gap()};
}

PairGeometry pair_geometry(const BtzBackground& bg, const StaticDetector& j,
                           const StaticDetector& k) {
  if (j.gap() != k.gap()) throw DomainError("pair_geometry: detectors must share one gap");
  const double ell2 = bg.ell() * bg.ell();
  const double r_h = bg.horizon_radius();
  const double gj = j.gamma();
  const double gk = k.gamma();
  const double g2 = gj * gj + gk * gk;
  const double omega = j.gap();

  PairGeometry pg{};
  pg.radius_j = j.radius();
  pg.radius_k = k.radius();
  pg.gamma_j = gj;
  pg.gamma_k = gk;
  pg.delta_phi = j.phi() - k.phi();
  pg.a = gj * gj * gk * gk * ell2 * ell2 / (2.0 * g2 * r_h * r_h);
  pg.beta_plus = gj * gk * (gj + gk) / g2 * ell2 / r_h * omega;
  pg.beta_minus = gj * gk * (gj - gk) / g2 * ell2 / r_h * omega;
  const double prefactor = std::sqrt(gj * gk) / (2.0 * std::sqrt(kPi) * std::sqrt(g2));
  pg.k_plus = prefactor * std::exp(-omega * omega * (gj + gk) * (gj + gk) / (2.0 * g2));
  pg.k_minus = prefactor * std::exp(-omega * omega * (gj - gk) * (gj - gk) / (2.0 * g2));
  return pg;
}

double alpha_single(const StaticDetector& det, const BtzBackground& bg, long n, Branch sign) {
  const double theta = 2.0 * kPi * static_cast<double>(n) * bg.horizon_radius() / bg.ell();
  return image_alpha(det.radius(), det.radius(), det.gamma(), det.gamma(), bg.horizon_radius(),
                     bg.ell(), theta, sign);
}

double alpha_pair(const PairGeometry& pg, const BtzBackground& bg, long n, Branch sign) {
  const double theta =
      bg.horizon_radius() / bg.ell() * (pg.delta_phi + 2.0 * kPi * static_cast<double>(n));
  return image_alpha(pg.radius_j, pg.radius_k, pg.gamma_j, pg.gamma_k, bg.horizon_radius(),
                     bg.ell(), theta, sign);
}

}  // namespace harvest
