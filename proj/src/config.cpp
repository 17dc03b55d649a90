#include "harvest/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "harvest/errors.hpp"

namespace harvest {

namespace {

using json = nlohmann::json;

void check_keys(const json& section, const std::string& name, const std::set<std::string>& allowed) {
  if (!section.is_object()) throw ConfigError("section '" + name + "' must be an object");
  for (const auto& [key, value] : section.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + name + "." + key + "'");
  }
}

template <class T>
void read(const json& section, const std::string& sec, const char* key, T& out) {
  if (!section.contains(key)) return;
  try {
    out = section.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("bad value for '" + sec + "." + key + "': " + e.what());
  }
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

NegativityMode parse_mode(const std::string& s) {
  if (s == "leading_order") return NegativityMode::leading_order;
  if (s == "eigen") return NegativityMode::eigen;
  if (s == "closed_form") return NegativityMode::closed_form;
  throw ConfigError("numerics.negativity must be leading_order, eigen or closed_form");
}

}  // namespace

std::string to_string(GeometryKind kind) { return kind == GeometryKind::triangle ? "triangle" : "line"; }

RunConfig parse_config(const json& j) {
  RunConfig cfg{};
  check_keys(j, "<root>", {"background", "detectors", "numerics", "output"});

  if (j.contains("background")) {
    const json& s = j.at("background");
    check_keys(s, "background", {"ell", "mass", "zeta"});
    read(s, "background", "ell", cfg.background.ell);
    read(s, "background", "mass", cfg.background.mass);
    read(s, "background", "zeta", cfg.background.zeta);
  }
  if (j.contains("detectors")) {
    const json& s = j.at("detectors");
    check_keys(s, "detectors", {"omega", "geometry", "d_horizon", "spacing"});
    read(s, "detectors", "omega", cfg.detectors.omega);
    std::string geometry = to_string(cfg.detectors.geometry);
    read(s, "detectors", "geometry", geometry);
    if (geometry == "triangle") {
      cfg.detectors.geometry = GeometryKind::triangle;
    } else if (geometry == "line") {
      cfg.detectors.geometry = GeometryKind::line;
    } else {
      throw ConfigError("detectors.geometry must be triangle or line");
    }
    read(s, "detectors", "d_horizon", cfg.detectors.d_horizon);
    read(s, "detectors", "spacing", cfg.detectors.spacing);
  }
  if (j.contains("numerics")) {
    const json& s = j.at("numerics");
    check_keys(s, "numerics",
               {"quad_tol_rel", "quad_tol_abs", "max_subdivisions", "image_tol_rel", "image_tol_abs",
                "image_consecutive_small", "image_n_cap", "branch_sign", "negativity", "lambda_eval",
                "lambda_companion", "epsilons"});
    auto& c = cfg.numerics.controls;
    read(s, "numerics", "quad_tol_rel", c.quad.tol_rel);
    read(s, "numerics", "quad_tol_abs", c.quad.tol_abs);
    read(s, "numerics", "max_subdivisions", c.quad.max_subdivisions);
    read(s, "numerics", "image_tol_rel", c.image.tol_rel);
    read(s, "numerics", "image_tol_abs", c.image.tol_abs);
    read(s, "numerics", "image_consecutive_small", c.image.consecutive_small);
    read(s, "numerics", "image_n_cap", c.image.n_cap);
    read(s, "numerics", "branch_sign", c.branch_sign);
    std::string mode = to_string(cfg.numerics.negativity);
    read(s, "numerics", "negativity", mode);
    cfg.numerics.negativity = parse_mode(mode);
    read(s, "numerics", "lambda_eval", cfg.numerics.lambda_eval.first);
    read(s, "numerics", "lambda_companion", cfg.numerics.lambda_eval.second);
    read(s, "numerics", "epsilons", cfg.numerics.epsilons);
  }
  if (j.contains("output")) {
    const json& s = j.at("output");
    check_keys(s, "output", {"path", "format"});
    read(s, "output", "path", cfg.output.path);
    read(s, "output", "format", cfg.output.format);
  }

  require(cfg.background.ell > 0.0, "background.ell must be > 0");
  require(cfg.background.mass > 0.0, "background.mass must be > 0");
  require(cfg.background.zeta >= -1 && cfg.background.zeta <= 1, "background.zeta must be -1, 0 or 1");
  require(std::isfinite(cfg.detectors.omega), "detectors.omega must be finite");
  require(cfg.detectors.d_horizon > 0.0, "detectors.d_horizon must be > 0");
  require(cfg.detectors.spacing > 0.0, "detectors.spacing must be > 0");
  const auto& le = cfg.numerics.lambda_eval;
  require(le.first > 0.0 && le.first <= 0.1 && le.second > 0.0 && le.second <= 0.1 && le.first != le.second,
          "numerics.lambda_eval and lambda_companion must be distinct and in (0, 0.1]");
  require(!cfg.numerics.epsilons.empty(), "numerics.epsilons must not be empty");
  for (double e : cfg.numerics.epsilons) require(e > 0.0, "numerics.epsilons must be > 0");
  require(cfg.output.format == "csv" || cfg.output.format == "json", "output.format must be csv or json");
  require(!(cfg.numerics.negativity == NegativityMode::closed_form && cfg.detectors.geometry == GeometryKind::line),
          "numerics.negativity = closed_form needs the triangle geometry");
  validate(cfg.numerics.controls);
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& cfg) {
  const auto& c = cfg.numerics.controls;
  return json{
      {"background", {{"ell", cfg.background.ell}, {"mass", cfg.background.mass}, {"zeta", cfg.background.zeta}}},
      {"detectors",
       {{"omega", cfg.detectors.omega},
        {"geometry", to_string(cfg.detectors.geometry)},
        {"d_horizon", cfg.detectors.d_horizon},
        {"spacing", cfg.detectors.spacing}}},
      {"numerics",
       {{"quad_tol_rel", c.quad.tol_rel},
        {"quad_tol_abs", c.quad.tol_abs},
        {"max_subdivisions", c.quad.max_subdivisions},
        {"image_tol_rel", c.image.tol_rel},
        {"image_tol_abs", c.image.tol_abs},
        {"image_consecutive_small", c.image.consecutive_small},
        {"image_n_cap", c.image.n_cap},
        {"branch_sign", c.branch_sign},
        {"negativity", to_string(cfg.numerics.negativity)},
        {"lambda_eval", cfg.numerics.lambda_eval.first},
        {"lambda_companion", cfg.numerics.lambda_eval.second},
        {"epsilons", cfg.numerics.epsilons}}},
      {"output", {{"path", cfg.output.path}, {"format", cfg.output.format}}},
  };
}

const std::vector<std::string>& sweepable_parameters() {
  static const std::vector<std::string> names{"mass", "d_horizon", "omega", "ell", "spacing"};
  return names;
}

void set_parameter(RunConfig& cfg, const std::string& name, double value) {
  if (name == "mass") {
    cfg.background.mass = value;
  } else if (name == "d_horizon") {
    cfg.detectors.d_horizon = value;
  } else if (name == "omega") {
    cfg.detectors.omega = value;
  } else if (name == "ell") {
    cfg.background.ell = value;
  } else if (name == "spacing") {
    cfg.detectors.spacing = value;
  } else {
    throw ConfigError("unknown sweep parameter '" + name + "'");
  }
}

double get_parameter(const RunConfig& cfg, const std::string& name) {
  if (name == "mass") return cfg.background.mass;
  if (name == "d_horizon") return cfg.detectors.d_horizon;
  if (name == "omega") return cfg.detectors.omega;
  if (name == "ell") return cfg.background.ell;
  if (name == "spacing") return cfg.detectors.spacing;
  throw ConfigError("unknown sweep parameter '" + name + "'");
}

}  // namespace harvest
