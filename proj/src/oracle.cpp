#include "harvest/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "harvest/errors.hpp"

namespace harvest {

namespace {

using cd = std::complex<double>;

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlX{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                     0.9602898564975363};
constexpr std::array<double, 4> kGlW{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                     0.1012285362903763};

template <class F>
auto gauss_legendre(F&& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  decltype(f(c)) sum{};
  for (std::size_t i = 0; i < kGlX.size(); ++i) {
    sum += kGlW[i] * (f(c - h * kGlX[i]) + f(c + h * kGlX[i]));
  }
  return h * sum;
}

double switching(double tau) { return std::exp(-0.5 * tau * tau); }

struct ElementSetup {
  double gamma_j;
  double gamma_k;
  double c1;    // phase per unit p
  double c0;    // phase per unit s
  double sign;  // overall sign
  bool time_ordered;
};

ElementSetup setup_for(const DetectorConfiguration& cfg, ElementKind kind, int j, int k) {
  const double gj = cfg.detector(j).gamma();
  const double gk = cfg.detector(k).gamma();
  const double omega = cfg.gap();
  switch (kind) {
    case ElementKind::P:
    case ElementKind::C:
      // exp(-i Omega (tau_j - tau_k')), tau_j = gj p, tau_k' = gk (p - s)
      return {gj, gk, -omega * (gj - gk), -omega * gk, 1.0, false};
    case ElementKind::X:
      // -exp(+i Omega (tau_j + tau_k')) with the time-ordered Wightman function
      return {gj, gk, omega * (gj + gk), -omega * gk, -1.0, true};
  }
  throw DomainError("unknown element kind");
}

// int dp chi(gj p) chi(gk (p - s)) exp(i c1 p), times exp(i c0 s).
cd inner_integral(const ElementSetup& e, double s, double window, int panels) {
  const double g2 = e.gamma_j * e.gamma_j + e.gamma_k * e.gamma_k;
  const double center = e.gamma_k * e.gamma_k * s / g2;
  const double reach = 10.0 / std::sqrt(g2);
  const double lo = std::max({-window / e.gamma_j, s - window / e.gamma_k, center - reach});
  const double hi = std::min({window / e.gamma_j, s + window / e.gamma_k, center + reach});
  if (!(hi > lo)) return 0.0;
  cd sum = 0.0;
  auto f = [&](double p) {
    return switching(e.gamma_j * p) * switching(e.gamma_k * (p - s)) * std::polar(1.0, e.c1 * p);
  };
  for (int i = 0; i < panels; ++i) {
    const double a = lo + (hi - lo) * i / panels;
    const double b = i + 1 == panels ? hi : lo + (hi - lo) * (i + 1) / panels;
    sum += gauss_legendre(f, a, b);
  }
  return sum * std::polar(1.0, e.c0 * s);
}

std::vector<double> outer_breakpoints(const WightmanEvaluator& w, const BtzBackground& bg, double s_max,
                                      int base_panels, bool kink_at_zero) {
  std::vector<double> pts;
  const double base = 2.0 * s_max / base_panels;
  for (int i = 0; i <= base_panels; ++i) pts.push_back(-s_max + base * i);
  const double scale = w.epsilon() * bg.ell() * bg.ell() / bg.horizon_radius();
  std::vector<double> cones = w.light_cone_times(s_max);
  if (kink_at_zero) cones.push_back(0.0);
  for (double c : cones) {
    pts.push_back(c);
    for (double h = scale / 8.0; h <= 2.0 * base; h *= 2.0) {
      pts.push_back(c - h);
      pts.push_back(c + h);
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (p < -s_max || p > s_max) continue;
    if (!out.empty() && p - out.back() < 1e-9 * base) continue;
    out.push_back(p);
  }
  return out;
}

}  // namespace

std::string to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::P: return "P";
    case ElementKind::C: return "C";
    case ElementKind::X: return "X";
  }
  return "?";
}

WightmanEvaluator::WightmanEvaluator(const BtzBackground& bg, double r, double r_prime, double delta_phi,
                                     double epsilon, const ImageSumControls& image)
    : bg_(bg), delta_phi_(delta_phi), epsilon_(epsilon), image_(image) {
  if (!(epsilon > 0.0)) throw DomainError("Wightman regulator epsilon must be > 0");
  const double r_h = bg.horizon_radius();
  const double rh2 = r_h * r_h;
  const double q = std::sqrt((r - r_h) * (r + r_h) * (r_prime - r_h) * (r_prime + r_h));
  const double p = r * r_prime - rh2;
  a_ = r * r_prime / rh2;
  b_ = q / rh2;
  spatial_ = (r - r_prime) * (r - r_prime) / (p + q);
}

std::complex<double> WightmanEvaluator::operator()(double dt) const {
  const double r_h = bg_.horizon_radius();
  const double ell = bg_.ell();
  const double y = r_h * dt / (ell * ell);
  // cosh(y - i eps) - 1
  const double sh = std::sinh(0.5 * y);
  const double se = std::sin(0.5 * epsilon_);
  const cd temporal(2.0 * sh * sh * std::cos(epsilon_) - 2.0 * se * se, -std::sinh(y) * std::sin(epsilon_));
  const double zeta = bg_.zeta();
  auto term = [&](long n) {
    const double theta = r_h / ell * (delta_phi_ - 2.0 * kPi * static_cast<double>(n));
    const double sth = std::sinh(0.5 * theta);
    // sigma = a cosh(theta) - 1 - b cosh(y - i eps)
    const cd sigma = 2.0 * a_ * sth * sth + spatial_ - b_ * temporal;
    cd t = 1.0 / std::sqrt(sigma);
    if (zeta != 0.0) t -= zeta / std::sqrt(sigma + 2.0);
    return t;
  };
  const auto sum = image_sum<cd>(term, image_, ImageRange::two_sided);
  return sum.sum / (4.0 * kPi * std::sqrt(2.0) * ell);
}

std::vector<double> WightmanEvaluator::light_cone_times(double dt_max) const {
  const double r_h = bg_.horizon_radius();
  const double ell = bg_.ell();
  const double y_max = r_h * dt_max / (ell * ell);
  std::vector<double> out;
  auto visit = [&](long n) {
    const double theta = r_h / ell * (delta_phi_ - 2.0 * kPi * static_cast<double>(n));
    const double sth = std::sinh(0.5 * theta);
    const double t = (2.0 * a_ * sth * sth + spatial_) / b_;
    bool any = false;
    for (double extra : {0.0, 2.0 / b_}) {
      if (extra != 0.0 && bg_.zeta() == 0) continue;
      const double y = arccosh_one_plus(t + extra);
      if (y <= y_max) {
        any = true;
        const double s = y * ell * ell / r_h;
        out.push_back(s);
        if (s != 0.0) out.push_back(-s);
      }
    }
    return any;
  };
  visit(0);
  for (long n = 1; n < image_.n_cap; ++n) {
    const bool up = visit(n);
    const bool down = visit(-n);
    if (!up && !down && std::abs(r_h / ell * 2.0 * kPi * n) > std::abs(r_h / ell * delta_phi_) + 1.0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

void validate(const OracleControls& ctrl) {
  if (ctrl.epsilons.empty()) throw ConfigError("oracle needs at least one epsilon");
  for (double e : ctrl.epsilons) {
    if (!(e > 0.0)) throw ConfigError("oracle epsilons must be > 0");
  }
  if (!(ctrl.window > 0.0)) throw ConfigError("oracle window must be > 0");
  if (ctrl.base_panels < 2 || ctrl.inner_panels < 1) throw ConfigError("oracle panel counts too small");
  validate(ctrl.image);
}

std::complex<double> oracle_value(const DetectorConfiguration& cfg, ElementKind kind, int j, int k,
                                  double epsilon, const OracleControls& ctrl, double* grid_error,
                                  long* nodes) {
  validate(ctrl);
  if (j < 0 || k < 0 || j >= cfg.size() || k >= cfg.size()) throw DomainError("detector index out of range");
  if (kind == ElementKind::P && j != k) throw DomainError("oracle P needs j == k");
  if (kind != ElementKind::P && j == k) throw DomainError("oracle C/X need j != k");
  const StaticDetector& dj = cfg.detector(j);
  const StaticDetector& dk = cfg.detector(k);
  const ElementSetup e = setup_for(cfg, kind, j, k);
  const WightmanEvaluator w(cfg.background(), dj.radius(), dk.radius(), dj.phi() - dk.phi(), epsilon,
                            ctrl.image);

  const double g2 = e.gamma_j * e.gamma_j + e.gamma_k * e.gamma_k;
  const double s_max = std::min(ctrl.window / e.gamma_j + ctrl.window / e.gamma_k,
                                10.0 * std::sqrt(g2) / (e.gamma_j * e.gamma_k));
  const std::vector<double> pts =
      outer_breakpoints(w, cfg.background(), s_max, ctrl.base_panels, e.time_ordered);
  const long n_panels = static_cast<long>(pts.size()) - 1;

  auto integrand = [&](double s) {
    const cd wight = e.time_ordered ? w.time_ordered(s) : w(s);
    return wight * inner_integral(e, s, ctrl.window, ctrl.inner_panels);
  };
  std::vector<cd> coarse(static_cast<std::size_t>(n_panels));
  std::vector<cd> fine(static_cast<std::size_t>(n_panels));
  auto panel = [&](long i) {
    const double a = pts[static_cast<std::size_t>(i)];
    const double b = pts[static_cast<std::size_t>(i + 1)];
    const double m = 0.5 * (a + b);
    coarse[static_cast<std::size_t>(i)] = gauss_legendre(integrand, a, b);
    fine[static_cast<std::size_t>(i)] = gauss_legendre(integrand, a, m) + gauss_legendre(integrand, m, b);
  };
  if (ctrl.exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n_panels; ++i) panel(i);
  } else {
    for (long i = 0; i < n_panels; ++i) panel(i);
  }
  cd sum_coarse = 0.0;
  cd sum_fine = 0.0;
  for (long i = 0; i < n_panels; ++i) {
    sum_coarse += coarse[static_cast<std::size_t>(i)];
    sum_fine += fine[static_cast<std::size_t>(i)];
  }
  const double jac = e.sign * e.gamma_j * e.gamma_k;
  if (grid_error) *grid_error = std::abs(jac) * std::abs(sum_fine - sum_coarse);
  if (nodes) *nodes = 24 * n_panels;
  return jac * sum_fine;
}

std::vector<std::vector<cd>> neville_table(const std::vector<double>& h, const std::vector<cd>& v) {
  if (h.size() != v.size() || h.empty()) throw DomainError("neville_table: size mismatch");
  std::vector<std::vector<cd>> t(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    t[i].resize(i + 1);
    t[i][0] = v[i];
    for (std::size_t m = 1; m <= i; ++m) {
      const double hi = h[i - m];
      const double lo = h[i];
      // value at 0 of the polynomial through points i-m..i
      t[i][m] = (hi * t[i][m - 1] - lo * t[i - 1][m - 1]) / (hi - lo);
    }
  }
  return t;
}

OracleReport oracle_element(const DetectorConfiguration& cfg, ElementKind kind, int j, int k,
                            const OracleControls& ctrl) {
  validate(ctrl);
  OracleReport rep{};
  rep.kind = kind;
  rep.j = j;
  rep.k = k;
  rep.epsilons = ctrl.epsilons;
  for (double eps : ctrl.epsilons) {
    double ge = 0.0;
    long nodes = 0;
    rep.raw.push_back(oracle_value(cfg, kind, j, k, eps, ctrl, &ge, &nodes));
    rep.grid_error.push_back(ge);
    rep.nodes += nodes;
  }
  rep.table = neville_table(rep.epsilons, rep.raw);
  const auto& last = rep.table.back();
  rep.value = last.back();
  rep.error_estimate = last.size() > 1 ? std::abs(last[last.size() - 1] - last[last.size() - 2]) : 0.0;
  for (std::size_t i = 2; i < rep.raw.size(); ++i) {
    const cd d1 = rep.raw[i - 1] - rep.raw[i - 2];
    const cd d2 = rep.raw[i] - rep.raw[i - 1];
    if (!(std::real(d2 * std::conj(d1)) > 0.0 && std::abs(d2) < std::abs(d1))) rep.monotone = false;
  }
  return rep;
}

std::complex<double> fast_element(const DetectorConfiguration& cfg, ElementKind kind, int j, int k,
                                  const NumericsControls& ctrl) {
  switch (kind) {
    case ElementKind::P: return transition_probability(cfg, j, ctrl);
    case ElementKind::C: return pair_correlator_C(cfg, j, k, ctrl);
    case ElementKind::X: return pair_correlator_X(cfg, j, k, ctrl);
  }
  throw DomainError("unknown element kind");
}

bool agrees(std::complex<double> fast, std::complex<double> oracle, double rel, double abs) {
  return std::abs(fast - oracle) <= std::max(rel * std::abs(oracle), abs);
}

BranchComparison compare_branches(const DetectorConfiguration& cfg, ElementKind kind, int j, int k,
                                  const OracleControls& oracle_ctrl, const NumericsControls& numerics) {
  BranchComparison c{};
  c.kind = kind;
  c.j = j;
  c.k = k;
  const OracleReport rep = oracle_element(cfg, kind, j, k, oracle_ctrl);
  c.oracle = rep.value;
  c.oracle_error = rep.error_estimate;
  NumericsControls n = numerics;
  n.branch_sign = -1;
  c.fast_minus = fast_element(cfg, kind, j, k, n);
  n.branch_sign = 1;
  c.fast_plus = fast_element(cfg, kind, j, k, n);
  c.minus_agrees = agrees(c.fast_minus, c.oracle);
  c.plus_agrees = agrees(c.fast_plus, c.oracle);
  return c;
}

}  // namespace harvest
