// harvest: correlators, negativities and pi-tangles of static detectors outside
// a BTZ black hole.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 self-test failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "harvest/cache.hpp"
#include "harvest/configurations.hpp"
#include "harvest/csv.hpp"
#include "harvest/errors.hpp"
#include "harvest/oracle.hpp"
#include "harvest/pipeline.hpp"
#include "harvest/presets.hpp"
#include "harvest/selftest.hpp"

using namespace harvest;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerics = 3;
constexpr int kExitSelftest = 4;

struct Options {
  std::string config;
  std::string out;
  std::vector<std::string> vary;
  std::string preset;
  std::string resolution = "coarse";
  int workers = max_threads();
  bool no_cache = false;
  bool skip_oracle = false;
  std::vector<int> criteria;
};

RunConfig load(const Options& o) { return o.config.empty() ? RunConfig{} : load_config(o.config); }

std::string output_path(const Options& o, const RunConfig& cfg) { return o.out.empty() ? cfg.output.path : o.out; }

// Writes to `path`, or standard output when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

PointOptions point_options(const Options& o) {
  PointOptions p;
  p.use_cache = !o.no_cache;
  return p;
}

int single_point(const Options& o, const std::vector<std::string>& columns) {
  const RunConfig cfg = load(o);
  const PointResult r = run_point(cfg, point_options(o));
  for (const auto& w : r.correlators.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::ostringstream os;
  if (cfg.output.format == "json") {
    os << point_json(r).dump(2) << '\n';
  } else {
    write_csv(os, {r}, columns);
  }
  emit(output_path(o, cfg), os.str());
  return 0;
}

int sweep(const Options& o) {
  const RunConfig cfg = load(o);
  if (o.vary.empty()) throw ConfigError("sweep needs at least one --vary name:min:max:steps[:log]");
  std::vector<SweepSpec> specs;
  for (const auto& v : o.vary) specs.push_back(parse_sweep(v));
  SweepOptions so;
  so.workers = o.workers;
  so.point = point_options(o);
  so.progress = true;
  const auto rows = run_sweep(sweep_points(cfg, specs), so);
  std::ostringstream os;
  if (cfg.output.format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back(point_json(r));
    os << arr.dump(2) << '\n';
  } else {
    write_csv(os, rows);
  }
  emit(output_path(o, cfg), os.str());
  return all_ok(rows) ? 0 : kExitNumerics;
}

int figure(const Options& o) {
  if (o.preset.empty()) throw ConfigError("figure needs --preset (one of fig2-top ... fig7)");
  const RunConfig cfg = load(o);
  const std::filesystem::path dir = o.out.empty() ? std::filesystem::path("figures") : std::filesystem::path(o.out);
  SweepOptions so;
  so.workers = o.workers;
  so.point = point_options(o);
  so.progress = true;
  bool ok = true;
  for (const auto& panel : figure_preset(o.preset, parse_resolution(o.resolution), cfg.numerics)) {
    std::fprintf(stderr, "%s: %s, %zu points\n", panel.name.c_str(), panel.description.c_str(), panel.points.size());
    const auto rows = run_sweep(panel.points, so);
    ok = ok && all_ok(rows);
    const auto path = dir / (panel.name + ".csv");
    emit(path.string(), to_csv(rows));
    std::fprintf(stderr, "wrote %s\n", path.string().c_str());
  }
  return ok ? 0 : kExitNumerics;
}

std::string num(double v) { return format_double(v); }

std::string complex_str(std::complex<double> z) {
  if (z.imag() == 0.0) return num(z.real());
  return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) + "i";
}

int oracle(const Options& o) {
  OracleControls oc;
  NumericsControls numerics;
  std::optional<DetectorConfiguration> cfg;
  std::string where;
  if (o.config.empty()) {
    const BtzBackground bg(10.0, 1.0, 1);
    const double rh = bg.horizon_radius();
    cfg.emplace(bg, std::vector<StaticDetector>{StaticDetector(bg, radius_at_distance(bg, rh, 1.0), 0.0, 1.0),
                                                StaticDetector(bg, radius_at_distance(bg, rh, 2.0), 0.0, 1.0)});
    where = "calibration point: ell = 10, M = 1, zeta = 1, Omega = 1, detectors A and B at proper distance 1 and 2 "
            "from the horizon, common angle";
  } else {
    const RunConfig rc = load(o);
    cfg.emplace(build_configuration(rc));
    oc.epsilons = rc.numerics.epsilons;
    numerics = rc.numerics.controls;
    where = "configuration from " + std::filesystem::path(o.config).filename().string() + ": " +
            to_string(rc.detectors.geometry) + ", ell = " + num(rc.background.ell) + ", M = " +
            num(rc.background.mass) + ", Omega = " + num(rc.detectors.omega) + ", d_horizon = " +
            num(rc.detectors.d_horizon);
  }

  struct Item {
    ElementKind kind;
    int j, k;
  };
  std::vector<Item> items;
  for (int j = 0; j < cfg->size(); ++j) items.push_back({ElementKind::P, j, j});
  for (const auto& [j, k] : kPairs) {
    if (k < cfg->size()) {
      items.push_back({ElementKind::C, j, k});
      items.push_back({ElementKind::X, j, k});
    }
  }

  std::ostringstream md;
  md << "# Oracle calibration\n\n";
  md << "Generated by `harvest oracle`. The fast single-integral path is compared with the "
        "regulated double integral, extrapolated to zero regulator.\n\n";
  md << where << ".\n\n";
  md << "Regulator values:";
  for (double e : oc.epsilons) md << ' ' << num(e);
  md << "; proper-time window +-" << num(oc.window) << ", " << oc.base_panels << " base panels.\n\n";
  md << "Agreement rule: |fast - oracle| <= max(1e-3 |oracle|, 1e-6).\n\n";

  bool all_minus = true, any_plus_rejected = false;
  for (const Item& it : items) {
    const std::string name = to_string(it.kind) + "_" + detector_name(it.j) +
                             (it.kind == ElementKind::P ? "" : detector_name(it.k));
    std::fprintf(stderr, "oracle %s ...\n", name.c_str());
    const OracleReport rep = oracle_element(*cfg, it.kind, it.j, it.k, oc);
    NumericsControls minus = numerics, plus = numerics;
    minus.branch_sign = -1;
    plus.branch_sign = 1;
    BranchComparison b;
    b.fast_minus = fast_element(*cfg, it.kind, it.j, it.k, minus);
    b.fast_plus = fast_element(*cfg, it.kind, it.j, it.k, plus);
    b.minus_agrees = agrees(b.fast_minus, rep.value);
    b.plus_agrees = agrees(b.fast_plus, rep.value);
    all_minus = all_minus && b.minus_agrees;
    any_plus_rejected = any_plus_rejected || !b.plus_agrees;
    md << "## " << name << "\n\n";
    md << "| epsilon | raw value | grid error |\n|---|---|---|\n";
    for (std::size_t i = 0; i < rep.epsilons.size(); ++i) {
      md << "| " << num(rep.epsilons[i]) << " | " << complex_str(rep.raw[i]) << " | " << num(rep.grid_error[i])
         << " |\n";
    }
    md << "\n- extrapolated: " << complex_str(rep.value) << " (estimate " << num(rep.error_estimate)
       << ", monotone: " << (rep.monotone ? "yes" : "no") << ")\n";
    md << "- fast, branch sign -1: " << complex_str(b.fast_minus) << " (" << (b.minus_agrees ? "agrees" : "disagrees")
       << ")\n";
    md << "- fast, branch sign +1: " << complex_str(b.fast_plus) << " (" << (b.plus_agrees ? "agrees" : "disagrees")
       << ")\n\n";
  }
  md << "## Branch sign\n\n";
  if (all_minus && any_plus_rejected) {
    md << "The frozen sign -1 agrees with the oracle for every element; +1 is rejected.\n";
  } else if (all_minus) {
    md << "The frozen sign -1 agrees with the oracle for every element; no element here separates the two signs.\n";
  } else {
    md << "The frozen sign -1 does NOT agree with the oracle for every element.\n";
  }

  const std::string path = o.out.empty() ? "docs/data/oracle_calibration.md" : o.out;
  emit(path, md.str());
  std::fprintf(stderr, "wrote %s\n", path.c_str());
  return all_minus ? 0 : kExitNumerics;
}

int selftest(const Options& o) {
  AcceptanceOptions ao;
  ao.include_oracle = !o.skip_oracle;
  ao.only = o.criteria;
  bool ok = true;
  run_acceptance(ao, [&](const CriterionResult& r) {
    std::printf("%s\n", format_result(r).c_str());
    std::fflush(stdout);
    ok = ok && r.pass;
  });
  return ok ? 0 : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement harvesting by static detectors outside a BTZ black hole"};
  app.set_version_flag("--version", std::string(HARVEST_VERSION));
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON run configuration (docs/config.md)")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output path (directory for `figure`)");
    sub->add_flag("--no-cache", o.no_cache, "do not read or write the result cache");
  };

  auto* correlators = app.add_subcommand("correlators", "P, C and X of one configuration");
  add_common(correlators);
  auto* negativity = app.add_subcommand("negativity", "bipartite and one-vs-rest negativities of one configuration");
  add_common(negativity);
  auto* pitangle = app.add_subcommand("pitangle", "full record including the pi-tangle of one configuration");
  add_common(pitangle);

  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep over the --vary grid");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--vary", o.vary, "name:min:max:steps[:log], repeatable; the first varies slowest")
      ->required();
  sweep_cmd->add_option("--workers", o.workers, "parallel sweep points")->check(CLI::PositiveNumber);

  auto* figure_cmd = app.add_subcommand("figure", "CSV data of a figure preset, one file per panel");
  add_common(figure_cmd);
  figure_cmd->add_option("--preset", o.preset, "fig2-top, fig2-bottom, fig3, fig4-top, fig4-bottom, fig5, fig6, fig7")
      ->required();
  figure_cmd->add_option("--resolution", o.resolution, "coarse or full")->check(CLI::IsMember({"coarse", "full"}));
  figure_cmd->add_option("--workers", o.workers, "parallel sweep points")->check(CLI::PositiveNumber);

  auto* oracle_cmd = app.add_subcommand("oracle", "compare the fast path with the double-integral oracle");
  oracle_cmd->add_option("--config", o.config, "configuration to check instead of the calibration point")
      ->check(CLI::ExistingFile);
  oracle_cmd->add_option("--out", o.out, "report path (default docs/data/oracle_calibration.md)");

  auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance criteria");
  selftest_cmd->add_flag("--skip-oracle", o.skip_oracle, "skip the oracle criterion");
  selftest_cmd->add_option("--only", o.criteria, "criterion ids to run")->check(CLI::Range(1, kCriteriaCount));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*correlators) return single_point(o, correlator_columns());
    if (*negativity) return single_point(o, negativity_columns());
    if (*pitangle) return single_point(o, csv_columns());
    if (*sweep_cmd) return sweep(o);
    if (*figure_cmd) return figure(o);
    if (*oracle_cmd) return oracle(o);
    if (*selftest_cmd) return selftest(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerics;
  } catch (const ConsistencyError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerics;
  }
  return 0;
}
