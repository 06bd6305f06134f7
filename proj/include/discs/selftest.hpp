#pragma once

#include <string>
#include <vector>

namespace discs {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs the built-in property suites (normalizer gradients, density
/// normalization, sampler geometry, gradient checks, scalarization identity,
/// tabular monotonicity). Returns one result per suite.
std::vector<SelftestResult> run_selftests();

}  // namespace discs
