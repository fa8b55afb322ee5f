#pragma once

#include <string>
#include <vector>

#include "curkit/types.hpp"

namespace curkit {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // failing seeds / worst margins for reproduction
};

/// The user-facing self-check battery: exact recovery, bound validity,
/// oversampling monotonicity, cross-implementation agreement, interpolation,
/// and determinism. `quick` trims the seed counts to stay under a minute.
std::vector<CheckResult> run_verification(bool quick, double eps);

}  // namespace curkit
