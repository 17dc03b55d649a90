#include "harvest/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "harvest/cache.hpp"
#include "harvest/configurations.hpp"
#include "harvest/errors.hpp"

namespace harvest {

namespace {

double parse_number(const std::string& s, const std::string& what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("sweep: bad " + what + " '" + s + "'");
  }
  return v;
}

PointResult failed(const RunConfig& cfg, const std::string& what) {
  PointResult r;
  r.config = cfg;
  r.status = PointStatus::converge_fail;
  r.error = what;
  return r;
}

}  // namespace

std::string to_string(PointStatus status) { return status == PointStatus::ok ? "ok" : "converge_fail"; }

PointResult run_point(const RunConfig& cfg, const PointOptions& opts) {
  const DetectorConfiguration det = build_configuration(cfg);
  const NumericsControls& ctrl = cfg.numerics.controls;

  PointResult out;
  out.config = cfg;
  for (int j = 0; j < det.size(); ++j) out.radius[static_cast<std::size_t>(j)] = det.detector(j).radius();

  std::optional<ResultCache> cache;
  std::string key;
  if (opts.use_cache) {
    cache.emplace(opts.cache_dir.empty() ? default_cache_dir() : opts.cache_dir);
    key = cache_key(det, ctrl);
    if (auto hit = cache->load(key)) {
      out.correlators = std::move(*hit);
      out.cache_hit = true;
    }
  }
  if (!out.cache_hit) {
    out.correlators = compute_correlators(det, ctrl, opts.exec);
    if (cache) cache->store(key, out.correlators);
  }
  out.report = pi_tangle(out.correlators, cfg.numerics.negativity, cfg.numerics.lambda_eval);
  return out;
}

std::vector<double> SweepSpec::values() const {
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) / (steps - 1);
    if (log) {
      v[static_cast<std::size_t>(i)] = std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
    } else {
      v[static_cast<std::size_t>(i)] = min + t * (max - min);
    }
  }
  v.front() = min;
  v.back() = max;
  return v;
}

void validate(const SweepSpec& spec) {
  const auto& names = sweepable_parameters();
  if (std::find(names.begin(), names.end(), spec.parameter) == names.end()) {
    throw ConfigError("sweep: unknown parameter '" + spec.parameter + "'");
  }
  if (!(spec.min < spec.max)) throw ConfigError("sweep: need min < max");
  if (spec.steps < 2) throw ConfigError("sweep: need steps >= 2");
  if (spec.log && !(spec.min > 0.0)) throw ConfigError("sweep: log scale needs min > 0");
}

SweepSpec parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 4 && parts.size() != 5) {
    throw ConfigError("sweep: expected name:min:max:steps[:log], got '" + text + "'");
  }
  SweepSpec spec;
  spec.parameter = parts[0];
  spec.min = parse_number(parts[1], "min");
  spec.max = parse_number(parts[2], "max");
  int steps = 0;
  auto res = std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), steps);
  if (res.ec != std::errc() || res.ptr != parts[3].data() + parts[3].size()) {
    throw ConfigError("sweep: bad steps '" + parts[3] + "'");
  }
  spec.steps = steps;
  if (parts.size() == 5) {
    if (parts[4] == "log") {
      spec.log = true;
    } else if (parts[4] != "linear") {
      throw ConfigError("sweep: scale must be log or linear");
    }
  }
  validate(spec);
  return spec;
}

std::vector<RunConfig> sweep_points(const RunConfig& base, const std::vector<SweepSpec>& specs) {
  std::vector<RunConfig> points{base};
  for (const auto& spec : specs) {
    validate(spec);
    std::vector<RunConfig> next;
    for (const auto& p : points) {
      for (double v : spec.values()) {
        RunConfig c = p;
        set_parameter(c, spec.parameter, v);
        next.push_back(std::move(c));
      }
    }
    points = std::move(next);
  }
  return points;
}

std::vector<PointResult> run_sweep(const std::vector<RunConfig>& points, const SweepOptions& opts) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      build_configuration(points[i]);
    } catch (const DomainError& e) {
      throw ConfigError("sweep point " + std::to_string(i) + ": " + e.what());
    }
  }
  const long n = static_cast<long>(points.size());
  std::vector<PointResult> rows(points.size());
  PointOptions inner = opts.point;
  const int workers = std::max(1, opts.workers);
  if (workers > 1) inner.exec = Execution::serial;

#pragma omp parallel for schedule(dynamic, 1) num_threads(workers) if (workers > 1)
  for (long i = 0; i < n; ++i) {
    const auto& cfg = points[static_cast<std::size_t>(i)];
    try {
      rows[static_cast<std::size_t>(i)] = run_point(cfg, inner);
    } catch (const ConvergenceError& e) {
      rows[static_cast<std::size_t>(i)] = failed(cfg, e.what());
    } catch (const ConsistencyError& e) {
      rows[static_cast<std::size_t>(i)] = failed(cfg, e.what());
    } catch (const std::exception& e) {
      rows[static_cast<std::size_t>(i)] = failed(cfg, std::string("unexpected: ") + e.what());
    }
    if (opts.progress) {
      const auto& r = rows[static_cast<std::size_t>(i)];
      std::fprintf(stderr, "point %ld/%ld %s%s%s\n", i + 1, n, to_string(r.status).c_str(),
                   r.error.empty() ? "" : ": ", r.error.c_str());
    }
  }
  return rows;
}

bool all_ok(const std::vector<PointResult>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const PointResult& r) { return r.status == PointStatus::ok; });
}

}  // namespace harvest
