#ifndef MUKSTAB_VERIFY_HPP
#define MUKSTAB_VERIFY_HPP

#include <string>
#include <vector>

#include "mukstab/io.hpp"

namespace mukstab {

struct CheckResult {
  std::string name;
  bool pass = false;
  double worst = 0.0;      // worst observed error or margin
  double tolerance = 0.0;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

// Verification suites mirroring the acceptance checklist.  `all` runs each of
// them in a fixed order.
std::vector<std::string> verify_suite_names();
SuiteResult run_verify_suite(const std::string& name);
std::vector<SuiteResult> run_all_suites();

Json suite_result_to_json(const SuiteResult& r);
Json suites_to_json(const std::vector<SuiteResult>& rs);

}  // namespace mukstab

#endif
