#pragma once

// Run configuration: JSON with the sections background, detectors, numerics
// and output. Every key is optional (defaults below); unknown keys are errors.
// Schema: docs/config.md.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "harvest/correlators.hpp"
#include "harvest/entanglement.hpp"

namespace harvest {

enum class GeometryKind { triangle, line };

struct BackgroundConfig {
  double ell = 10.0;
  double mass = 0.01;
  int zeta = 1;
};

struct DetectorsConfig {
  double omega = 1.0;
  GeometryKind geometry = GeometryKind::triangle;
  double d_horizon = 1.0;  // triangle: every detector; line: detector A
  double spacing = 1.0;    // line only
};

struct NumericsConfig {
  NumericsControls controls{};
  NegativityMode negativity = NegativityMode::leading_order;
  EigenCouplings lambda_eval{};
  std::vector<double> epsilons{0.04, 0.02, 0.01};
};

struct OutputConfig {
  std::string path;           // empty: standard output
  std::string format = "csv";  // csv | json
};

struct RunConfig {
  BackgroundConfig background{};
  DetectorsConfig detectors{};
  NumericsConfig numerics{};
  OutputConfig output{};
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);

std::string to_string(GeometryKind kind);

// Sets a sweepable parameter: mass, d_horizon, omega, ell, spacing.
void set_parameter(RunConfig& cfg, const std::string& name, double value);
double get_parameter(const RunConfig& cfg, const std::string& name);
const std::vector<std::string>& sweepable_parameters();

}  // namespace harvest
