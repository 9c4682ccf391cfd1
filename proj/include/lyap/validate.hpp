#pragma once

#include <string>
#include <vector>

namespace lyap {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Built-in oracle suite behind `lyap validate`: explicit dense-product
/// equivalences for every chain recursion plus reference-value checks.
std::vector<CheckResult> run_validation_suite();

}  // namespace lyap
