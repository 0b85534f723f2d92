#pragma once

#include <string>
#include <vector>

namespace specidx {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  unsigned long seed = 0x51DEC5;
  bool negative_control = false;  // deliberately corrupts one check
  std::vector<int> only;          // run a subset of criterion ids; empty = all
};

/// The full cross-validation suite.  Each criterion runs independently;
/// exceptions are caught and reported as failures.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

}  // namespace specidx
