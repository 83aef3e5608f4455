#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fpp {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  std::string artifact;  // report text produced by the criterion, if any
};

struct SuiteOptions {
  int jobs = 1;
  std::vector<int> only;            // empty runs every criterion
  std::ostream* progress = nullptr;  // one line per finished criterion
};

std::vector<CriterionResult> run_acceptance(const SuiteOptions& options);
std::string format_result(const CriterionResult& r);

}  // namespace fpp
