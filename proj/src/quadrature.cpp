#include "harvest/quadrature.hpp"

#include "harvest/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace harvest {

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

using cd = std::complex<double>;
using Values = std::array<cd, kMaxOutputs>;
using Errors = std::array<double, kMaxOutputs>;

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Gauss-Kronrod 15/7 (QUADPACK qk15).
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double quadpack_error(double diff, double resabs, double resasc) {
  double err = std::abs(diff);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  return err;
}

// ln(2 sinh y), y > 0.
double ln_two_sinh(double y) {
  if (y < 20.0) return std::log(2.0 * std::sinh(y));
  return y + std::log1p(-std::exp(-2.0 * y));
}

// sinh(w) / w
double sinhc(double w) {
  if (std::abs(w) < 1e-4) return 1.0 + w * w / 6.0;
  return std::sinh(w) / w;
}

// Coordinate charts for the pieces of [0, x_max].
enum class Chart {
  plain_left,   // x = t < alpha
  plain_right,  // x = t > alpha
  u_left,       // x = alpha - t^2
  u_right,      // x = alpha + t^2
};

class SingularKernel {
 public:
  SingularKernel(double alpha, double a, std::span<const WeightedOutput> outputs, int sign)
      : alpha_(alpha), a_(a), outputs_(outputs), sign_(sign) {}

  std::size_t size() const { return outputs_.size(); }

  // Integrand values (including the chart Jacobian) at chart coordinate t.
  void operator()(Chart chart, double t, Values& f) const {
    double x = t;
    double big = 0.0;     // argument of the non-vanishing sinh factor
    double ln_rest = 0.0; // log of the remaining factor of the denominator
    double jac_ln = 0.0;
    bool left = true;
    switch (chart) {
      case Chart::plain_left:
        big = 0.5 * (alpha_ + x);
        ln_rest = ln_two_sinh(0.5 * (alpha_ - x)) - 2.0 * kLn2;
        break;
      case Chart::plain_right:
        left = false;
        big = 0.5 * (x + alpha_);
        ln_rest = ln_two_sinh(0.5 * (x - alpha_)) - 2.0 * kLn2;
        break;
      case Chart::u_left:
      case Chart::u_right: {
        const double w = 0.5 * t * t;
        left = chart == Chart::u_left;
        x = left ? alpha_ - t * t : alpha_ + t * t;
        big = left ? alpha_ - w : alpha_ + w;
        // 2u / sqrt(2 sinh(big) sinh(u^2/2)) = 2 / sqrt(sinh(big) sinhc(u^2/2))
        ln_rest = std::log(sinhc(w)) - 2.0 * kLn2;
        jac_ln = kLn2;
        break;
      }
    }
    for (std::size_t i = 0; i < size(); ++i) f[i] = 0.0;
    if (!(big > 0.0)) return;
    // kernel = exp(-a x^2) / sqrt(2 sinh(big) * rest) with rest folded into ln_rest
    const double ln_kernel = -a_ * x * x + jac_ln - 0.5 * (ln_two_sinh(big) + ln_rest + kLn2);
    if (ln_kernel < -745.0 || !std::isfinite(ln_kernel)) return;
    const double kernel = std::exp(ln_kernel);
    for (std::size_t i = 0; i < size(); ++i) {
      const WeightedOutput& o = outputs_[i];
      const double bx = o.beta * x;
      const double c = std::cos(bx);
      cd w = o.weight == Weight::cosine ? cd(c, 0.0) : cd(c, -std::sin(bx));
      cd v = left ? kernel * w : cd(0.0, sign_ * kernel) * w;
      if (o.part == Part::real) v = cd(v.real(), 0.0);
      f[i] = v;
    }
  }

 private:
  double alpha_;
  double a_;
  std::span<const WeightedOutput> outputs_;
  int sign_;
};

struct Segment {
  Chart chart;
  double lo;
  double hi;
  Values value{};
  Errors error{};
  Errors absval{};
  double priority = 0.0;
};

struct SegmentOrder {
  bool operator()(const Segment& l, const Segment& r) const { return l.priority < r.priority; }
};

void gk15(const SingularKernel& k, Segment& s, long& evals) {
  const std::size_t m = k.size();
  const double center = 0.5 * (s.lo + s.hi);
  const double half = 0.5 * (s.hi - s.lo);
  std::array<Values, 15> fv;
  k(s.chart, center, fv[0]);
  for (int j = 0; j < 7; ++j) {
    k(s.chart, center - half * kXgk[j], fv[1 + 2 * j]);
    k(s.chart, center + half * kXgk[j], fv[2 + 2 * j]);
  }
  evals += 15;
  for (std::size_t i = 0; i < m; ++i) {
    for (int part = 0; part < 2; ++part) {
      auto comp = [&](int idx) { return part == 0 ? fv[idx][i].real() : fv[idx][i].imag(); };
      const double fc = comp(0);
      double resk = fc * kWgk[7];
      double resg = fc * kWg[3];
      double resabs = std::abs(resk);
      for (int j = 0; j < 7; ++j) {
        const double f1 = comp(1 + 2 * j);
        const double f2 = comp(2 + 2 * j);
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
      }
      const double mean = 0.5 * resk;
      double resasc = kWgk[7] * std::abs(fc - mean);
      for (int j = 0; j < 7; ++j) {
        resasc += kWgk[j] * (std::abs(comp(1 + 2 * j) - mean) + std::abs(comp(2 + 2 * j) - mean));
      }
      const double err = quadpack_error((resk - resg) * half, resabs * half, resasc * half);
      if (part == 0) {
        s.value[i] = cd(resk * half, 0.0);
        s.error[i] = err;
        s.absval[i] = resabs * half;
      } else {
        s.value[i] += cd(0.0, resk * half);
        s.error[i] += err;
        s.absval[i] += resabs * half;
      }
    }
  }
}

// Tanh-sinh rule on [lo, hi] refined level by level. Returns true once successive
// levels agree to the per-output target.
bool tanh_sinh(const SingularKernel& k, Segment& s, double tol_rel, double tol_abs, long& evals) {
  constexpr double kTmax = 4.0;
  constexpr int kMaxLevel = 7;
  const std::size_t m = k.size();
  const double half = 0.5 * (s.hi - s.lo);
  const double mid = 0.5 * (s.hi + s.lo);
  Values sum{};
  Values prev{};
  Values fv{};
  auto add_node = [&](double t) {
    const double v = 0.5 * kPi * std::sinh(t);
    const double ev = std::exp(std::abs(v));
    const double dist = half * 2.0 / (ev * ev + 1.0);
    const double w = half * 0.5 * kPi * std::cosh(t) * 4.0 / ((ev + 1.0 / ev) * (ev + 1.0 / ev));
    if (dist <= 0.0 || w < 1e-300) return;
    const double x = t > 0.0 ? s.hi - dist : (t < 0.0 ? s.lo + dist : mid);
    k(s.chart, x, fv);
    ++evals;
    for (std::size_t i = 0; i < m; ++i) sum[i] += w * fv[i];
  };
  double h = 1.0;
  for (int level = 0; level <= kMaxLevel; ++level) {
    if (level == 0) {
      for (double t = -kTmax; t <= kTmax + 0.5 * h; t += h) add_node(t);
    } else {
      h *= 0.5;
      for (double t = -kTmax + h; t < kTmax; t += 2.0 * h) add_node(t);
    }
    Values cur{};
    for (std::size_t i = 0; i < m; ++i) cur[i] = h * sum[i];
    if (level >= 3) {
      bool ok = true;
      for (std::size_t i = 0; i < m; ++i) {
        const double diff = std::abs(cur[i] - prev[i]);
        if (diff > 0.1 * std::max(tol_abs, tol_rel * std::abs(cur[i]))) ok = false;
      }
      if (ok) {
        for (std::size_t i = 0; i < m; ++i) {
          s.value[i] = cur[i];
          s.error[i] = std::abs(cur[i] - prev[i]);
          s.absval[i] = std::abs(cur[i]);
        }
        return true;
      }
    }
    prev = cur;
  }
  return false;
}

void split_uniform(std::vector<Segment>& out, Chart chart, double lo, double hi, double width) {
  if (!(hi > lo)) return;
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
  for (int j = 0; j < n; ++j) {
    const double a = lo + (hi - lo) * j / n;
    const double b = j + 1 == n ? hi : lo + (hi - lo) * (j + 1) / n;
    out.push_back({chart, a, b});
  }
}

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace

void validate(const QuadratureControls& ctrl) {
  if (!(ctrl.tol_rel > 0.0) || !(ctrl.tol_abs > 0.0)) {
    throw ConfigError("quadrature tolerances must be positive");
  }
  if (ctrl.max_subdivisions < 1) throw ConfigError("max_subdivisions must be >= 1");
}

void validate(const ImageSumControls& ctrl) {
  if (!(ctrl.tol_rel > 0.0) || !(ctrl.tol_abs >= 0.0)) {
    throw ConfigError("image-sum tolerances must be positive");
  }
  if (ctrl.consecutive_small < 1) throw ConfigError("consecutive_small must be >= 1");
  if (ctrl.n_cap < 1) throw ConfigError("n_cap must be >= 1");
}

SingularResult singular_integrals(double alpha, double a, std::span<const WeightedOutput> outputs,
                                  const QuadratureControls& ctrl, int branch_sign) {
  validate(ctrl);
  require(std::isfinite(alpha) && alpha >= 0.0, "singular integral: alpha must be >= 0");
  require(std::isfinite(a) && a > 0.0, "singular integral: a must be > 0");
  require(!outputs.empty() && outputs.size() <= kMaxOutputs, "singular integral: 1..4 outputs");
  require(branch_sign == 1 || branch_sign == -1, "branch sign must be +1 or -1");
  double beta_max = 0.0;
  for (const auto& o : outputs) {
    require(std::isfinite(o.beta), "singular integral: beta must be finite");
    if (alpha == 0.0 && o.part == Part::complex) {
      throw DomainError("singular integral: complex value diverges at alpha = 0");
    }
    beta_max = std::max(beta_max, std::abs(o.beta));
  }

  const std::size_t m = outputs.size();
  const SingularKernel kernel(alpha, a, outputs, branch_sign);
  SingularResult result{};

  const double ln_tol = std::max(10.0, std::log(1.0 / ctrl.tol_abs));
  const double reach = std::sqrt(ln_tol / a);
  const double width = beta_max > 0.0 ? std::min(kPi / beta_max, 0.5) : 0.5;
  const double delta_left = std::min(alpha, width);
  const double delta_right = width;

  std::vector<Segment> gk;
  std::vector<Segment> de;
  if (reach < alpha - delta_left) {
    split_uniform(gk, Chart::plain_left, 0.0, reach, width);
  } else {
    const double x_max = alpha + std::min(reach, 2.0 * ln_tol) + 1.0;
    split_uniform(gk, Chart::plain_left, 0.0, alpha - delta_left, width);
    if (delta_left > 0.0) de.push_back({Chart::u_left, 0.0, std::sqrt(delta_left)});
    de.push_back({Chart::u_right, 0.0, std::sqrt(delta_right)});
    split_uniform(gk, Chart::plain_right, alpha + delta_right, x_max, width);
  }

  Values fixed{};
  Errors fixed_err{};
  Errors fixed_abs{};
  std::vector<Segment> fixed_segments;
  for (auto& s : de) {
    if (tanh_sinh(kernel, s, ctrl.tol_rel, ctrl.tol_abs, result.evaluations)) {
      for (std::size_t i = 0; i < m; ++i) {
        fixed[i] += s.value[i];
        fixed_err[i] += s.error[i];
        fixed_abs[i] += s.absval[i];
      }
      fixed_segments.push_back(s);
    } else {
      gk.push_back(s);
    }
  }

  Values total = fixed;
  Errors err = fixed_err;
  Errors absval = fixed_abs;
  for (auto& s : gk) {
    gk15(kernel, s, result.evaluations);
    for (std::size_t i = 0; i < m; ++i) {
      total[i] += s.value[i];
      err[i] += s.error[i];
      absval[i] += s.absval[i];
    }
  }

  auto targets = [&]() {
    Errors t{};
    for (std::size_t i = 0; i < m; ++i) {
      t[i] = std::max(ctrl.tol_abs, ctrl.tol_rel * std::abs(total[i])) + 100.0 * kEps * absval[i];
    }
    return t;
  };
  auto priority = [&](const Segment& s, const Errors& t) {
    double p = 0.0;
    for (std::size_t i = 0; i < m; ++i) p = std::max(p, s.error[i] / t[i]);
    return p;
  };

  std::priority_queue<Segment, std::vector<Segment>, SegmentOrder> heap;
  {
    const Errors t = targets();
    for (auto& s : gk) {
      s.priority = priority(s, t);
      heap.push(s);
    }
  }

  long subdivisions = 0;
  while (true) {
    const Errors t = targets();
    bool done = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (err[i] > t[i]) done = false;
    }
    if (done) break;
    // Tanh-sinh pieces accepted against their own magnitude can exceed a target set
    // by a cancelling total; hand them to the adaptive loop.
    bool demote = heap.empty();
    for (std::size_t i = 0; i < m; ++i) {
      if (fixed_err[i] > 0.5 * t[i]) demote = true;
    }
    if (demote && !fixed_segments.empty()) {
      for (auto& s : fixed_segments) {
        for (std::size_t i = 0; i < m; ++i) {
          total[i] -= s.value[i];
          err[i] -= s.error[i];
          absval[i] -= s.absval[i];
        }
        gk15(kernel, s, result.evaluations);
        for (std::size_t i = 0; i < m; ++i) {
          total[i] += s.value[i];
          err[i] += s.error[i];
          absval[i] += s.absval[i];
        }
        s.priority = priority(s, t);
        heap.push(s);
      }
      fixed_segments.clear();
      fixed_err = Errors{};
      continue;
    }
    if (heap.empty()) break;
    if (subdivisions >= ctrl.max_subdivisions) {
      std::ostringstream os;
      os << "singular integral: subdivision cap reached (alpha = " << alpha << ", a = " << a;
      for (std::size_t i = 0; i < m; ++i) {
        os << "; output " << i << ": error " << err[i] << " > target " << t[i] << ", fixed " << fixed_err[i]
           << ", top " << heap.top().priority;
      }
      os << ")";
      throw ConvergenceError(os.str());
    }
    Segment s = heap.top();
    heap.pop();
    const double mid = 0.5 * (s.lo + s.hi);
    if (!(mid > s.lo && mid < s.hi) || s.hi - s.lo < 1e-13 * std::max(1.0, std::abs(mid))) {
      continue;  // unrefinable: its error stays in the budget
    }
    Segment l{s.chart, s.lo, mid};
    Segment r{s.chart, mid, s.hi};
    gk15(kernel, l, result.evaluations);
    gk15(kernel, r, result.evaluations);
    ++subdivisions;
    for (std::size_t i = 0; i < m; ++i) {
      total[i] += l.value[i] + r.value[i] - s.value[i];
      err[i] += l.error[i] + r.error[i] - s.error[i];
      absval[i] += l.absval[i] + r.absval[i] - s.absval[i];
    }
    l.priority = priority(l, t);
    r.priority = priority(r, t);
    heap.push(l);
    heap.push(r);
  }

  for (std::size_t i = 0; i < m; ++i) {
    result.values[i] = total[i];
    result.errors[i] = std::max(0.0, err[i]);
  }
  return result;
}

double singular_oscillatory(const SingularIntegralSpec& spec, const QuadratureControls& ctrl,
                            int branch_sign) {
  const WeightedOutput out{spec.kind == SingularIntegralSpec::Kind::cosine_real ? Weight::cosine
                                                                                : Weight::exponential,
                           spec.beta, Part::real};
  return singular_integrals(spec.alpha, spec.a, std::span(&out, 1), ctrl, branch_sign).values[0].real();
}

std::complex<double> singular_oscillatory_complex(const SingularIntegralSpec& spec,
                                                  const QuadratureControls& ctrl, int branch_sign) {
  const WeightedOutput out{spec.kind == SingularIntegralSpec::Kind::cosine_real ? Weight::cosine
                                                                                : Weight::exponential,
                           spec.beta, Part::complex};
  return singular_integrals(spec.alpha, spec.a, std::span(&out, 1), ctrl, branch_sign).values[0];
}

double fermi_gaussian(double temperature, double omega, double sigma, const QuadratureControls& ctrl) {
  validate(ctrl);
  require(std::isfinite(temperature) && temperature > 0.0, "fermi_gaussian: T must be > 0");
  require(std::isfinite(omega), "fermi_gaussian: Omega must be finite");
  require(std::isfinite(sigma) && sigma > 0.0, "fermi_gaussian: sigma must be > 0");

  auto f = [&](double x) {
    const double g = std::exp(-sigma * sigma * (x - omega) * (x - omega));
    const double y = x / temperature;
    const double fermi = y > 0.0 ? std::exp(-y) / (1.0 + std::exp(-y)) : 1.0 / (1.0 + std::exp(y));
    return g * fermi;
  };
  struct Piece {
    double lo, hi, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  auto rule = [&](double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const double fc = f(c);
    double resk = fc * kWgk[7], resg = fc * kWg[3], resabs = std::abs(resk);
    std::array<double, 14> fs;
    for (int j = 0; j < 7; ++j) {
      fs[2 * j] = f(c - h * kXgk[j]);
      fs[2 * j + 1] = f(c + h * kXgk[j]);
      resk += kWgk[j] * (fs[2 * j] + fs[2 * j + 1]);
      resabs += kWgk[j] * (std::abs(fs[2 * j]) + std::abs(fs[2 * j + 1]));
      if (j % 2 == 1) resg += kWg[j / 2] * (fs[2 * j] + fs[2 * j + 1]);
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) {
      resasc += kWgk[j] * (std::abs(fs[2 * j] - mean) + std::abs(fs[2 * j + 1] - mean));
    }
    return Piece{lo, hi, resk * h, quadpack_error((resk - resg) * h, resabs * h, resasc * h)};
  };

  const double lo = omega - 9.0 / sigma;
  const double hi = omega + 9.0 / sigma;
  std::priority_queue<Piece> heap;
  std::vector<double> cuts{lo};
  if (lo < 0.0 && hi > 0.0) cuts.push_back(0.0);
  cuts.push_back(hi);
  double total = 0.0;
  double err = 0.0;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    for (int q = 0; q < 8; ++q) {
      const double a = cuts[j] + (cuts[j + 1] - cuts[j]) * q / 8.0;
      const double b = q == 7 ? cuts[j + 1] : cuts[j] + (cuts[j + 1] - cuts[j]) * (q + 1) / 8.0;
      Piece p = rule(a, b);
      total += p.value;
      err += p.error;
      heap.push(p);
    }
  }
  int subdivisions = 0;
  while (err > std::max(ctrl.tol_abs, ctrl.tol_rel * std::abs(total)) && !heap.empty()) {
    if (subdivisions++ >= ctrl.max_subdivisions) {
      throw ConvergenceError("fermi_gaussian: subdivision cap reached");
    }
    Piece p = heap.top();
    heap.pop();
    const double mid = 0.5 * (p.lo + p.hi);
    if (!(mid > p.lo && mid < p.hi)) continue;
    Piece l = rule(p.lo, mid);
    Piece r = rule(mid, p.hi);
    total += l.value + r.value - p.value;
    err += l.error + r.error - p.error;
    heap.push(l);
    heap.push(r);
  }
  return total;
}

}  // namespace harvest
