#pragma once

// Acceptance criteria: the phenomenology thresholds of the standard
// figures, oracle agreement of the fast path, and structural checks of the
// density-matrix layer. Shared by `harvest selftest` and the acceptance test.

#include <functional>
#include <string>
#include <vector>

namespace harvest {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  bool include_oracle = true;  // criterion 10 is the slow one
  std::vector<int> only;       // empty: all criteria
};

inline constexpr int kCriteriaCount = 11;

CriterionResult run_criterion(int id);

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {},
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// "PASS [3] name (1.2 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace harvest
