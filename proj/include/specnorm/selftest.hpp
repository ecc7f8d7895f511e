#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace specnorm {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Randomized analytic invariants: circle factorization, the endoscopic
/// specialization of the general quartic, and the backprojection round
/// trip on exactly projected circles.
std::vector<CheckResult> run_analytic_checks(std::uint64_t seed, int samples = 1000);

}  // namespace specnorm
