#pragma once

// Single points and parameter sweeps: configuration -> correlators (cached)
// -> entanglement report.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "harvest/config.hpp"
#include "harvest/correlators.hpp"
#include "harvest/entanglement.hpp"

namespace harvest {

enum class PointStatus { ok, converge_fail };

std::string to_string(PointStatus status);

struct PointResult {
  RunConfig config{};
  std::array<double, 3> radius{};
  CorrelatorSet correlators{};
  EntanglementReport report{};
  PointStatus status = PointStatus::ok;
  std::string error;  // failing integral or check, when status != ok
  bool cache_hit = false;
};

struct PointOptions {
  bool use_cache = true;
  std::filesystem::path cache_dir;  // empty: default_cache_dir()
  Execution exec = Execution::parallel;
};

// Throws ConvergenceError/ConsistencyError on numerical failure and
// ConfigError/DomainError on bad input.
PointResult run_point(const RunConfig& cfg, const PointOptions& opts = {});

struct SweepSpec {
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int steps = 2;
  bool log = false;

  std::vector<double> values() const;
};

// "name:min:max:steps[:log]"
SweepSpec parse_sweep(const std::string& text);
void validate(const SweepSpec& spec);

// Cartesian product, the first spec varying slowest.
std::vector<RunConfig> sweep_points(const RunConfig& base, const std::vector<SweepSpec>& specs);

struct SweepOptions {
  int workers = 1;
  PointOptions point{};
  bool progress = false;  // one line per finished point on stderr
};

// Rows in grid order whatever the worker count. Numerical failures become
// converge_fail rows; invalid grid points throw ConfigError before any work.
std::vector<PointResult> run_sweep(const std::vector<RunConfig>& points, const SweepOptions& opts = {});

bool all_ok(const std::vector<PointResult>& rows);

}  // namespace harvest
