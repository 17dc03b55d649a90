#include "harvest/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

#include "harvest/configurations.hpp"
#include "harvest/entanglement.hpp"
#include "harvest/errors.hpp"
#include "harvest/oracle.hpp"
#include "harvest/pipeline.hpp"
#include "harvest/presets.hpp"

namespace harvest {

namespace {

using cd = std::complex<double>;

// Sign-level zero of a negativity per coupling^2, and of pi per coupling^4.
constexpr double kZeroN = 1e-12;
constexpr double kZeroPi = 1e-20;

struct Point {
  double d;
  PointResult r;
};

PointResult evaluate(GeometryKind geometry, double mass, double omega, double d, double spacing = 1.0) {
  RunConfig c;
  c.background.ell = 10.0;
  c.background.zeta = 1;
  c.background.mass = mass;
  c.detectors.geometry = geometry;
  c.detectors.omega = omega;
  c.detectors.d_horizon = d;
  c.detectors.spacing = spacing;
  PointOptions opts;
  opts.use_cache = false;
  return run_point(c, opts);
}

std::vector<Point> scan(GeometryKind geometry, double mass, double omega, const std::vector<double>& ds,
                        double spacing = 1.0) {
  std::vector<Point> out;
  for (double d : ds) out.push_back({d, evaluate(geometry, mass, omega, d, spacing)});
  return out;
}

double max_bipartite(const EntanglementReport& rep) {
  double m = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (j != k) m = std::max(m, rep.bipartite[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
    }
  }
  return m;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<double> triangle_grid() {
  std::vector<double> ds = grid(0.2, 10.0, 25, false);
  for (double d : {0.5, 1.0, 2.0, 4.0, 8.0}) ds.push_back(d);
  std::sort(ds.begin(), ds.end());
  return ds;
}

CriterionResult bipartite_shadow() {
  CriterionResult r{1, "bipartite shadow threshold", false, "", 0};
  const std::vector<double> ds{0.5, 1.0, 2.0, 4.0, 8.0};
  double heavy = 0.0;
  for (const auto& p : scan(GeometryKind::triangle, 0.03, 1.0, ds)) heavy = std::max(heavy, max_bipartite(p.r.report));
  double light = 0.0;
  for (const auto& p : scan(GeometryKind::triangle, 0.01, 1.0, ds)) light = std::max(light, max_bipartite(p.r.report));
  r.pass = heavy <= kZeroN && light > kZeroN;
  r.detail = "max N at M=0.03: " + fmt("%.3g", heavy) + ", at M=0.01: " + fmt("%.3g", light);
  return r;
}

CriterionResult tripartite_outlives() {
  CriterionResult r{2, "tripartite outlives bipartite", false, "", 0};
  const auto ds = triangle_grid();
  int ghz_points = 0;
  double ghz_d = 0.0;
  for (const auto& p : scan(GeometryKind::triangle, 0.024, 1.0, ds)) {
    if (p.r.report.pi > 0.0 && max_bipartite(p.r.report) <= kZeroN) {
      if (ghz_points++ == 0) ghz_d = p.d;
    }
  }
  double max_pi = -1.0;
  for (const auto& p : scan(GeometryKind::triangle, 0.03, 1.0, ds)) max_pi = std::max(max_pi, p.r.report.pi);
  r.pass = ghz_points > 0 && max_pi <= 0.0;
  r.detail = "M=0.024: " + std::to_string(ghz_points) + " points with pi>0 and N=0 (first d=" +
             fmt("%.3g", ghz_d) + "); M=0.03: max pi " + fmt("%.3g", max_pi);
  return r;
}

CriterionResult negative_pi() {
  CriterionResult r{3, "negative-pi region", false, "", 0};
  int stage = 0;
  double d_pos = 0, d_neg = 0, d_pos2 = 0;
  for (const auto& p : scan(GeometryKind::triangle, 0.005, 1.0, grid(0.2, 40.0, 40, true))) {
    const double pi = p.r.report.pi;
    if (stage == 0 && pi > 0.0) {
      stage = 1;
      d_pos = p.d;
    } else if (stage == 1 && pi < 0.0) {
      stage = 2;
      d_neg = p.d;
    } else if (stage == 2 && pi > 0.0) {
      stage = 3;
      d_pos2 = p.d;
    }
  }
  r.pass = stage == 3;
  r.detail = "signs +,-,+ first seen at d = " + fmt("%.3g", d_pos) + ", " + fmt("%.3g", d_neg) + ", " +
             fmt("%.3g", d_pos2) + " (stage " + std::to_string(stage) + ")";
  return r;
}

CriterionResult line_escape() {
  CriterionResult r{4, "line shadow escape", false, "", 0};
  auto pi_at = [](double omega, double d) { return evaluate(GeometryKind::line, 0.01, omega, d).report.pi; };
  const auto ds = grid(0.01, 10.0, 31, true);
  double lo = 0.0, hi = 0.0;
  bool bracket = false;
  double prev_pi = pi_at(0.01, ds[0]);
  for (std::size_t i = 1; i < ds.size(); ++i) {
    const double pi = pi_at(0.01, ds[i]);
    if (prev_pi <= 0.0 && pi > 0.0) {
      lo = ds[i - 1];
      hi = ds[i];
      bracket = true;
    }
    prev_pi = pi;
  }
  double crossing = 0.0;
  if (bracket) {
    for (int it = 0; it < 40 && hi / lo > 1.0 + 1e-6; ++it) {
      const double mid = std::sqrt(lo * hi);
      (pi_at(0.01, mid) > 0.0 ? hi : lo) = mid;
    }
    crossing = std::sqrt(lo * hi);
  }
  bool positive = true;
  double min_pi = 1.0;
  for (double d : ds) {
    const double pi = pi_at(0.1, d);
    min_pi = std::min(min_pi, pi);
    if (!(pi > 0.0)) positive = false;
  }
  r.pass = bracket && crossing >= 0.04 && crossing <= 0.12 && positive;
  r.detail = "omega 0.01 crossing at d = " + fmt("%.4g", crossing) + " (window [0.04, 0.12]); omega 0.1 min pi " +
             fmt("%.3g", min_pi);
  return r;
}

CriterionResult heavy_positivity() {
  CriterionResult r{5, "large-mass near-horizon positivity", true, "", 0};
  for (double omega : {0.01, 0.1}) {
    const double pi = evaluate(GeometryKind::line, 1.0, omega, 0.01).report.pi;
    if (!(pi > 0.0)) r.pass = false;
    r.detail += (r.detail.empty() ? "" : ", ") + std::string("pi(omega=") + fmt("%g", omega) + ") = " + fmt("%.3g", pi);
  }
  return r;
}

CriterionResult ghz_region() {
  CriterionResult r{6, "GHZ-type region", false, "", 0};
  const auto pts = scan(GeometryKind::line, 0.01, 0.1, grid(0.01, 10.0, 40, true));
  auto shadowed = [](const EntanglementReport& rep) {
    return rep.bipartite[0][1] <= kZeroN && rep.bipartite[0][2] <= kZeroN;
  };
  // Entering A's bipartite shadow from large d: the first grid point where both vanish.
  const Point* edge = nullptr;
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    if (shadowed(it->r.report)) {
      edge = &*it;
      break;
    }
  }
  if (!edge) {
    r.detail = "N_A(B) and N_A(C) never vanish together";
    return r;
  }
  const auto& rep = edge->r.report;
  r.pass = rep.one_vs_rest[0] > kZeroN && rep.pi > 0.0 && rep.bipartite[1][2] > kZeroN;
  const auto& first = pts.front().r.report;
  r.detail = "shadow edge d = " + fmt("%.4g", edge->d) + ": N_A(BC) " + fmt("%.3g", rep.one_vs_rest[0]) + ", pi " +
             fmt("%.3g", rep.pi) + ", N_B(C) " + fmt("%.3g", rep.bipartite[1][2]) + "; at d = 0.01: N_A(BC) " +
             fmt("%.3g", first.one_vs_rest[0]) + ", pi " + fmt("%.3g", first.pi);
  return r;
}

CriterionResult near_horizon_spike() {
  CriterionResult r{7, "near-horizon spike", false, "", 0};
  const auto pts = scan(GeometryKind::line, 0.01, 2.0, grid(0.01, 3.0, 40, true), 5.0);
  const double plateau = evaluate(GeometryKind::line, 0.01, 2.0, 50.0, 5.0).report.pi;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i].r.report.pi > pts[imax].r.report.pi) imax = i;
  }
  const double peak = pts[imax].r.report.pi;
  bool zero_left = false, zero_right = false;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (std::abs(pts[i].r.report.pi) <= kZeroPi) (i < imax ? zero_left : zero_right) = true;
  }
  r.pass = peak >= 1.5 * plateau && plateau > 0.0 && zero_left && zero_right;
  r.detail = "peak pi " + fmt("%.3g", peak) + " at d = " + fmt("%.3g", pts[imax].d) + ", plateau(d=50) " +
             fmt("%.3g", plateau) + ", ratio " + fmt("%.3g", plateau > 0 ? peak / plateau : 0.0) +
             ", zero left/right: " + (zero_left ? "yes" : "no") + "/" + (zero_right ? "yes" : "no");
  return r;
}

CriterionResult spike_localization() {
  CriterionResult r{8, "matrix-element spike localization", false, "", 0};
  const auto pts = scan(GeometryKind::line, 0.01, 2.5, grid(0.01, 3.0, 40, true), 5.0);
  auto interior_max = [&](int pair) {
    std::size_t imax = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (std::abs(pts[i].r.correlators.X[static_cast<std::size_t>(pair)]) >
          std::abs(pts[imax].r.correlators.X[static_cast<std::size_t>(pair)])) {
        imax = i;
      }
    }
    return imax > 0 && imax + 1 < pts.size();
  };
  bool bc_monotone_down = true, bc_monotone_up = true;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double a = std::abs(pts[i - 1].r.correlators.X[2]);
    const double b = std::abs(pts[i].r.correlators.X[2]);
    if (b > a) bc_monotone_down = false;
    if (b < a) bc_monotone_up = false;
  }
  const auto cs = evaluate(GeometryKind::line, 0.01, 2.5, 0.05, 5.0).correlators;
  const double ratio = std::min(cs.P[0] / cs.P[1], cs.P[0] / cs.P[2]);
  const bool ab = interior_max(0), ac = interior_max(1), bc = bc_monotone_down || bc_monotone_up;
  r.pass = ab && ac && bc && ratio >= 10.0;
  r.detail = std::string("|X_AB| interior max: ") + (ab ? "yes" : "no") + ", |X_AC|: " + (ac ? "yes" : "no") +
             ", |X_BC| monotone: " + (bc ? "yes" : "no") + ", min P_A/P_{B,C} at d=0.05: " + fmt("%.4g", ratio);
  return r;
}

CriterionResult plateau() {
  CriterionResult r{9, "asymptotic plateau", true, "", 0};
  double worst = 0.0;
  for (double mass : {0.01, 1.0}) {
    for (double omega : {0.01, 0.1, 0.5, 1.0}) {
      const double a = evaluate(GeometryKind::line, mass, omega, 40.0).report.pi;
      const double b = evaluate(GeometryKind::line, mass, omega, 60.0).report.pi;
      const double scale = std::max(std::abs(a), std::abs(b));
      const double rel = scale > 0.0 ? std::abs(a - b) / scale : 0.0;
      worst = std::max(worst, rel);
      if (rel > 0.01) r.pass = false;
    }
  }
  r.detail = "worst relative change pi(40) vs pi(60): " + fmt("%.3g", worst);
  return r;
}

CriterionResult oracle_equivalence() {
  CriterionResult r{10, "oracle equivalence", true, "", 0};
  const BtzBackground bg(10.0, 1.0, 1);
  const double rh = bg.horizon_radius();
  const DetectorConfiguration cfg(bg, {StaticDetector(bg, radius_at_distance(bg, rh, 1.0), 0.0, 1.0),
                                       StaticDetector(bg, radius_at_distance(bg, rh, 2.0), 0.0, 1.0)});
  struct Item {
    ElementKind kind;
    int j, k;
  };
  for (const Item& it : {Item{ElementKind::P, 0, 0}, Item{ElementKind::P, 1, 1}, Item{ElementKind::C, 0, 1},
                         Item{ElementKind::X, 0, 1}}) {
    const OracleReport o = oracle_element(cfg, it.kind, it.j, it.k);
    const cd fast = fast_element(cfg, it.kind, it.j, it.k);
    const bool ok = agrees(fast, o.value);
    if (!ok) r.pass = false;
    const double rel = std::abs(fast - o.value) / std::abs(o.value);
    r.detail += (r.detail.empty() ? "" : "; ") + to_string(it.kind) + detector_name(it.j) +
                (it.kind == ElementKind::P ? "" : detector_name(it.k)) + " rel " + fmt("%.2g", rel);
  }
  return r;
}

CriterionResult structural() {
  CriterionResult r{11, "structural suite", true, "", 0};
  std::vector<std::string> failures;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  const CorrelatorSet tri = evaluate(GeometryKind::triangle, 0.01, 1.0, 2.0).correlators;
  const CorrelatorSet line = evaluate(GeometryKind::line, 0.01, 0.1, 1.0).correlators;
  const double lambda = 1e-3;

  for (const CorrelatorSet* cs : {&tri, &line}) {
    const DensityMatrix rho = assemble_rho3(*cs, lambda);
    const ComplexMatrix& m = rho.matrix();
    check((m - m.adjoint()).cwiseAbs().maxCoeff() == 0.0, "Hermiticity");
    check(std::abs(m.trace() - cd(1.0, 0.0)) <= 1e-12, "unit trace");
    // Leading order couples the vacuum to pair excitations and single excitations to each other.
    auto allowed = [](int a, int b) {
      auto excitations = [](int i) { return i == 0 ? 0 : (i <= 3 ? 1 : (i <= 6 ? 2 : 3)); };
      const int ea = excitations(a), eb = excitations(b);
      if (a == b) return ea <= 1;
      if (ea == 1 && eb == 1) return true;
      return (ea == 0 && eb == 2) || (ea == 2 && eb == 0);
    };
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) {
        if (!allowed(a, b)) check(m(a, b) == cd(0.0, 0.0), "zero pattern");
      }
    }
    for (int s = 0; s < 3; ++s) {
      check(partial_transpose(partial_transpose(m, s), s) == m, "partial-transpose involution");
      const double n_eig = negativity(rho, s);
      const double n_tn = trace_norm_negativity(rho, s);
      check(std::abs(n_eig - n_tn) <= 1e-10, "eigenvalue sum vs trace norm");
      const double n1 = negativity(assemble_rho3(*cs, 1e-3), s) / 1e-6;
      const double lam2 = 1.7782794100389228e-3;
      const double n2 = negativity(assemble_rho3(*cs, lam2), s) / (lam2 * lam2);
      const double floor = 10.0 * kEigenZeroThreshold / (lam2 * lam2);
      if (std::max(n1, n2) > floor) {
        check(std::abs(n1 - n2) <= 1e-3 * std::max(n1, n2), "lambda insensitivity");
      }
    }
  }

  const EntanglementReport eig = pi_tangle(tri, NegativityMode::eigen);
  const double p = tri.P[0], c = tri.C[0];
  const cd x = tri.X[0];
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-6 * std::max(std::abs(a), std::abs(b)) + 1e-9; };
  check(close(eig.one_vs_rest[0], equilateral_one_vs_rest(p, c, x)), "closed form N_A(BC)");
  check(close(eig.bipartite[0][1], equilateral_bipartite(p, x)), "closed form N_A(B)");
  check(close(eig.pi, equilateral_pi(p, c, x)), "closed form pi");

  ComplexMatrix bell = ComplexMatrix::Zero(4, 4);
  bell(0, 0) = bell(0, 3) = bell(3, 0) = bell(3, 3) = 0.5;
  const double n_bell = negativity(DensityMatrix(bell), 0);
  check(std::abs(n_bell - 0.5) <= 1e-12, "Bell negativity");
  ComplexMatrix ghz = ComplexMatrix::Zero(8, 8);
  ghz(0, 0) = ghz(0, 7) = ghz(7, 0) = ghz(7, 7) = 0.5;
  const double pi_ghz = pi_tangle(DensityMatrix(ghz)).pi;
  check(std::abs(pi_ghz - 0.25) <= 1e-12, "GHZ pi-tangle");

  std::sort(failures.begin(), failures.end());
  failures.erase(std::unique(failures.begin(), failures.end()), failures.end());
  r.pass = failures.empty();
  r.detail = "Bell N " + fmt("%.15g", n_bell) + ", GHZ pi " + fmt("%.15g", pi_ghz);
  for (const auto& f : failures) r.detail += "; failed: " + f;
  return r;
}

}  // namespace

CriterionResult run_criterion(int id) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = bipartite_shadow(); break;
      case 2: r = tripartite_outlives(); break;
      case 3: r = negative_pi(); break;
      case 4: r = line_escape(); break;
      case 5: r = heavy_positivity(); break;
      case 6: r = ghz_region(); break;
      case 7: r = near_horizon_spike(); break;
      case 8: r = spike_localization(); break;
      case 9: r = plateau(); break;
      case 10: r = oracle_equivalence(); break;
      case 11: r = structural(); break;
      default: throw ConfigError("no criterion " + std::to_string(id));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    static const char* names[] = {"",
                                  "bipartite shadow threshold",
                                  "tripartite outlives bipartite",
                                  "negative-pi region",
                                  "line shadow escape",
                                  "large-mass near-horizon positivity",
                                  "GHZ-type region",
                                  "near-horizon spike",
                                  "matrix-element spike localization",
                                  "asymptotic plateau",
                                  "oracle equivalence",
                                  "structural suite"};
    r.id = id;
    r.name = names[id];
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteriaCount; ++id) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), id) == opts.only.end()) continue;
    if (id == 10 && !opts.include_oracle) continue;
    out.push_back(run_criterion(id));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1f", r.seconds);
  os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (" << secs << " s): " << r.detail;
  return os.str();
}

}  // namespace harvest
