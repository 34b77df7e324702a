#pragma once

#include <string>
#include <vector>

namespace etm {

struct CheckResult {
  int id;
  std::string name;
  bool pass;
  std::string detail;
  double seconds;
};

// Suites: geometry, razborov part of geometry; suite names are
// geometry | exact | closure | variational | mcmc | all.
std::vector<CheckResult> run_acceptance_suite(const std::string& suite);

bool all_passed(const std::vector<CheckResult>& results);
std::string suite_report_json(const std::string& suite, const std::vector<CheckResult>& results);

}  // namespace etm
