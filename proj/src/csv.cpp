#include "harvest/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "harvest/errors.hpp"

namespace harvest {

std::vector<std::string> csv_columns() {
  return {"geometry", "ell",     "mass",    "zeta",    "omega",   "d_horizon", "spacing", "R_A",     "R_B",
          "R_C",      "P_A",     "P_B",     "P_C",     "C_AB",    "C_AC",      "C_BC",    "X_AB_re", "X_AB_im",
          "X_AC_re",  "X_AC_im", "X_BC_re", "X_BC_im", "N_A_B",   "N_A_C",     "N_B_A",   "N_B_C",   "N_C_A",
          "N_C_B",    "N_A_BC",  "N_B_AC",  "N_C_AB",  "pi_A",    "pi_B",      "pi_C",    "pi",      "status"};
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::vector<std::string> fields(const PointResult& r) {
  std::vector<std::string> f;
  const auto& c = r.config;
  f.push_back(to_string(c.detectors.geometry));
  for (double v : {c.background.ell, c.background.mass}) f.push_back(format_double(v));
  f.push_back(std::to_string(c.background.zeta));
  for (double v : {c.detectors.omega, c.detectors.d_horizon}) f.push_back(format_double(v));
  f.push_back(c.detectors.geometry == GeometryKind::line ? format_double(c.detectors.spacing) : "");

  const bool ok = r.status == PointStatus::ok;
  auto num = [&](double v) { f.push_back(ok ? format_double(v) : ""); };
  for (double v : r.radius) num(v);
  const auto& cs = r.correlators;
  for (double v : cs.P) num(v);
  for (double v : cs.C) num(v);
  for (const auto& x : cs.X) {
    num(x.real());
    num(x.imag());
  }
  const auto& rep = r.report;
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      if (j != k) num(rep.bipartite[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
    }
  }
  for (double v : rep.one_vs_rest) num(v);
  for (double v : rep.pi_components) num(v);
  num(rep.pi);
  f.push_back(to_string(r.status));
  return f;
}

std::string join(const std::vector<std::string>& f) {
  std::string line;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) line.push_back(',');
    line += f[i];
  }
  return line;
}

std::vector<std::size_t> select(const std::vector<std::string>& columns) {
  const auto all = csv_columns();
  std::vector<std::size_t> idx;
  for (const auto& c : columns) {
    auto it = std::find(all.begin(), all.end(), c);
    if (it == all.end()) throw ConfigError("unknown column '" + c + "'");
    idx.push_back(static_cast<std::size_t>(it - all.begin()));
  }
  return idx;
}

std::vector<std::string> inputs_and(std::initializer_list<const char*> extra) {
  std::vector<std::string> cols{"geometry", "ell", "mass", "zeta", "omega", "d_horizon", "spacing", "R_A", "R_B", "R_C"};
  for (const char* e : extra) cols.push_back(e);
  cols.push_back("status");
  return cols;
}

}  // namespace

std::string csv_row(const PointResult& r) { return join(fields(r)); }

std::vector<std::string> correlator_columns() {
  return inputs_and({"P_A", "P_B", "P_C", "C_AB", "C_AC", "C_BC", "X_AB_re", "X_AB_im", "X_AC_re", "X_AC_im",
                     "X_BC_re", "X_BC_im"});
}

std::vector<std::string> negativity_columns() {
  return inputs_and({"N_A_B", "N_A_C", "N_B_A", "N_B_C", "N_C_A", "N_C_B", "N_A_BC", "N_B_AC", "N_C_AB"});
}

void write_csv(std::ostream& os, const std::vector<PointResult>& rows, const std::vector<std::string>& columns) {
  const auto idx = select(columns);
  os << join(columns) << '\n';
  for (const auto& r : rows) {
    const auto f = fields(r);
    std::vector<std::string> picked;
    for (std::size_t i : idx) picked.push_back(f[i]);
    os << join(picked) << '\n';
  }
}

nlohmann::json point_json(const PointResult& r) {
  nlohmann::json j = nlohmann::json::object();
  const auto cols = csv_columns();
  const auto f = fields(r);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const auto& c = cols[i];
    if (c == "geometry" || c == "status") {
      j[c] = f[i];
    } else if (f[i].empty()) {
      j[c] = nullptr;
    } else {
      double v = 0.0;
      std::from_chars(f[i].data(), f[i].data() + f[i].size(), v);
      j[c] = v;
    }
  }
  if (!r.error.empty()) j["error"] = r.error;
  j["warnings"] = r.correlators.warnings;
  return j;
}

void write_csv(std::ostream& os, const std::vector<PointResult>& rows) {
  const auto cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  for (const auto& r : rows) os << csv_row(r) << '\n';
}

std::string to_csv(const std::vector<PointResult>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

}  // namespace harvest
