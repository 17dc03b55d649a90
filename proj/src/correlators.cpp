#include "harvest/correlators.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "harvest/errors.hpp"

namespace harvest {

namespace {

using cd = std::complex<double>;

constexpr double kNegativeTolerance = 1e-12;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

void require_index(const DetectorConfiguration& cfg, int j) {
  if (j < 0 || j >= cfg.size()) throw DomainError("detector index out of range");
}

struct PairRequest {
  bool want_c;
  bool want_x;
};

PairCorrelators pair_sum(const DetectorConfiguration& cfg, int j, int k, const NumericsControls& ctrl,
                         PairRequest req) {
  validate(ctrl);
  require_index(cfg, j);
  require_index(cfg, k);
  if (j == k) throw DomainError("pair correlators need two distinct detectors");
  const BtzBackground& bg = cfg.background();
  PairGeometry pg = pair_geometry(bg, cfg.detector(j), cfg.detector(k));
  // The image sum is even in delta_phi, so fold it into [0, pi].
  pg.delta_phi = std::abs(std::remainder(pg.delta_phi, 2.0 * kPi));
  const int zeta = bg.zeta();

  std::array<WeightedOutput, 2> outs{};
  std::size_t n_out = 0;
  const std::size_t c_slot = n_out;
  if (req.want_c) outs[n_out++] = {Weight::exponential, pg.beta_plus, Part::real};
  const std::size_t x_slot = n_out;
  if (req.want_x) outs[n_out++] = {Weight::cosine, pg.beta_minus, Part::complex};
  const std::span<const WeightedOutput> span(outs.data(), n_out);

  ElementDiagnostics diag{};
  auto term = [&](long n) {
    std::array<cd, 2> t{};
    const double am = alpha_pair(pg, bg, n, Branch::minus);
    if (am == 0.0 && req.want_x) {
      throw DomainError("X correlator of coincident detectors diverges");
    }
    auto add = [&](double alpha, double weight) {
      const SingularResult r = singular_integrals(alpha, pg.a, span, ctrl.quad, ctrl.branch_sign);
      diag.evaluations += r.evaluations;
      if (req.want_c) {
        t[0] += weight * r.values[c_slot].real();
        diag.quad_error += std::abs(weight) * pg.k_minus * r.errors[c_slot];
      }
      if (req.want_x) {
        t[1] += weight * r.values[x_slot];
        diag.quad_error += std::abs(weight) * pg.k_plus * r.errors[x_slot];
      }
    };
    add(am, 1.0);
    if (zeta != 0) add(alpha_pair(pg, bg, n, Branch::plus), -static_cast<double>(zeta));
    return t;
  };
  const auto sum = image_sum<std::array<cd, 2>>(term, ctrl.image, ImageRange::two_sided);
  diag.image_terms = sum.terms;

  PairCorrelators out{};
  out.C = pg.k_minus * sum.sum[0].real();
  out.X = -pg.k_plus * sum.sum[1];
  out.diag = diag;
  return out;
}

}  // namespace

void validate(const NumericsControls& ctrl) {
  validate(ctrl.quad);
  validate(ctrl.image);
  if (ctrl.branch_sign != 1 && ctrl.branch_sign != -1) throw ConfigError("branch sign must be +1 or -1");
}

DetectorConfiguration::DetectorConfiguration(const BtzBackground& bg,
                                             std::vector<StaticDetector> detectors)
    : background_(bg), detectors_(std::move(detectors)) {
  if (detectors_.size() != 2 && detectors_.size() != 3) {
    throw DomainError("a configuration holds two or three detectors");
  }
  for (const auto& d : detectors_) {
    if (d.gap() != detectors_.front().gap()) throw DomainError("all detectors must share one gap");
  }
}

int pair_index(int j, int k) {
  if (j > k) std::swap(j, k);
  if (j == 0 && k == 1) return 0;
  if (j == 0 && k == 2) return 1;
  if (j == 1 && k == 2) return 2;
  throw DomainError("invalid detector pair");
}

std::string detector_name(int j) {
  static const char* names[] = {"A", "B", "C"};
  if (j < 0 || j > 2) throw DomainError("invalid detector index");
  return names[j];
}

std::string pair_name(int pair) {
  if (pair < 0 || pair > 2) throw DomainError("invalid pair index");
  const auto [j, k] = kPairs[static_cast<std::size_t>(pair)];
  return detector_name(j) + detector_name(k);
}

double transition_probability(const DetectorConfiguration& cfg, int which, const NumericsControls& ctrl,
                              ElementDiagnostics* diag) {
  validate(ctrl);
  require_index(cfg, which);
  const BtzBackground& bg = cfg.background();
  const StaticDetector& det = cfg.detector(which);
  const SingleGeometry sg = single_geometry(bg, det);
  const int zeta = bg.zeta();
  const WeightedOutput out{Weight::exponential, sg.beta, Part::real};
  const std::span<const WeightedOutput> span(&out, 1);

  ElementDiagnostics d{};
  auto integral = [&](double alpha) {
    const SingularResult r = singular_integrals(alpha, sg.a, span, ctrl.quad, ctrl.branch_sign);
    d.evaluations += r.evaluations;
    d.quad_error += kInvSqrt2Pi * r.errors[0];
    return r.values[0].real();
  };

  double p = 0.5 * fermi_gaussian(det.temperature(), det.gap(), 1.0, ctrl.quad);
  if (zeta != 0) p -= zeta * 0.5 * kInvSqrt2Pi * integral(alpha_single(det, bg, 0, Branch::plus));

  auto term = [&](long n) {
    double t = integral(alpha_single(det, bg, n, Branch::minus));
    if (zeta != 0) t -= zeta * integral(alpha_single(det, bg, n, Branch::plus));
    return kInvSqrt2Pi * t;
  };
  const auto images = image_sum<double>(term, ctrl.image, ImageRange::one_sided, 1);
  p += images.sum;
  d.image_terms = images.terms + 1;

  if (p < 0.0) {
    if (p < -kNegativeTolerance) {
      throw ConsistencyError("transition probability of detector " + detector_name(which) +
                             " is negative: " + std::to_string(p));
    }
    p = 0.0;
    d.clipped = true;
  }
  if (diag) *diag = d;
  return p;
}

double pair_correlator_C(const DetectorConfiguration& cfg, int j, int k, const NumericsControls& ctrl,
                         ElementDiagnostics* diag) {
  const PairCorrelators r = pair_sum(cfg, j, k, ctrl, {true, false});
  if (diag) *diag = r.diag;
  return r.C;
}

std::complex<double> pair_correlator_X(const DetectorConfiguration& cfg, int j, int k,
                                       const NumericsControls& ctrl, ElementDiagnostics* diag) {
  const PairCorrelators r = pair_sum(cfg, j, k, ctrl, {false, true});
  if (diag) *diag = r.diag;
  return r.X;
}

PairCorrelators pair_correlators(const DetectorConfiguration& cfg, int j, int k,
                                 const NumericsControls& ctrl) {
  return pair_sum(cfg, j, k, ctrl, {true, true});
}

CorrelatorSet compute_correlators(const DetectorConfiguration& cfg, const NumericsControls& ctrl,
                                  Execution exec) {
  validate(ctrl);
  CorrelatorSet cs{};
  cs.detectors = cfg.size();
  const int n_det = cfg.size();
  const int n_pairs = n_det == 3 ? 3 : 1;
  const int n_tasks = n_det + n_pairs;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_tasks));

  auto run = [&](int task) {
    try {
      if (task < n_det) {
        ElementDiagnostics d{};
        cs.P[static_cast<std::size_t>(task)] = transition_probability(cfg, task, ctrl, &d);
        cs.p_diag[static_cast<std::size_t>(task)] = d;
      } else {
        const int pair = task - n_det;
        const auto [j, k] = kPairs[static_cast<std::size_t>(pair)];
        const PairCorrelators r = pair_correlators(cfg, j, k, ctrl);
        cs.C[static_cast<std::size_t>(pair)] = r.C;
        cs.X[static_cast<std::size_t>(pair)] = r.X;
        cs.pair_diag[static_cast<std::size_t>(pair)] = r.diag;
      }
    } catch (...) {
      errors[static_cast<std::size_t>(task)] = std::current_exception();
    }
  };
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = 0; t < n_tasks; ++t) run(t);
  } else {
    for (int t = 0; t < n_tasks; ++t) run(t);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (int j = 0; j < n_det; ++j) {
    if (cs.p_diag[static_cast<std::size_t>(j)].clipped) {
      cs.warnings.push_back("P_" + detector_name(j) + " clipped from a tiny negative value to 0");
    }
  }
  return cs;
}

}  // namespace harvest
