#pragma once

// CSV tables of point results. One header row, fixed column order, '.'
// decimal separator and shortest round-trip number formatting regardless of
// locale. Failed rows keep their inputs and leave numeric outputs empty.
//
// Columns (docs/config.md lists them with units):
//   geometry, ell, mass, zeta, omega, d_horizon, spacing, R_A, R_B, R_C,
//   P_A, P_B, P_C, C_AB, C_AC, C_BC, X_AB_re, X_AB_im, X_AC_re, X_AC_im,
//   X_BC_re, X_BC_im, N_A_B, N_A_C, N_B_A, N_B_C, N_C_A, N_C_B,
//   N_A_BC, N_B_AC, N_C_AB, pi_A, pi_B, pi_C, pi, status

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "harvest/pipeline.hpp"

namespace harvest {

std::vector<std::string> csv_columns();

std::string format_double(double v);

std::string csv_row(const PointResult& r);

void write_csv(std::ostream& os, const std::vector<PointResult>& rows);
std::string to_csv(const std::vector<PointResult>& rows);

// Subset of csv_columns(), in the given order. Unknown names throw ConfigError.
void write_csv(std::ostream& os, const std::vector<PointResult>& rows, const std::vector<std::string>& columns);

std::vector<std::string> correlator_columns();
std::vector<std::string> negativity_columns();

// Every field of a record by column name; failed rows carry "error".
nlohmann::json point_json(const PointResult& r);

}  // namespace harvest
