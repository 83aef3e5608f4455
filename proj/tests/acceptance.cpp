// Runs acceptance criteria 1-13 and prints one PASS/FAIL line per criterion.
// Usage: acceptance [criterion ids...]

#include <cstdlib>
#include <iostream>
#include <string>

#include "fpp/parallel.hpp"
#include "fpp/suite.hpp"

int main(int argc, char** argv) {
  fpp::SuiteOptions opt;
  opt.jobs = fpp::default_jobs();
  for (int k = 1; k < argc; ++k) opt.only.push_back(std::stoi(argv[k]));
  opt.progress = &std::cout;
  int failed = 0;
  for (const fpp::CriterionResult& r : fpp::run_acceptance(opt)) {
    failed += !r.pass;
    if (r.id == 13) std::cout << r.artifact;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
