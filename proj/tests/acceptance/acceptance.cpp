#include <iostream>

#include "harvest/selftest.hpp"

int main() {
  harvest::AcceptanceOptions opts;
  int failed = 0;
  harvest::run_acceptance(opts, [&](const harvest::CriterionResult& r) {
    std::cout << harvest::format_result(r) << std::endl;
    if (!r.pass) ++failed;
  });
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << harvest::kCriteriaCount - failed << "/"
            << harvest::kCriteriaCount << std::endl;
  return failed ? 1 : 0;
}
