#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace starwell {

struct CheckResult {
  std::string id;      // short stable identifier
  std::string detail;  // measured numbers
  bool pass = false;
  double seconds = 0.0;
};

/// Run the full verification battery (integrability, reduction identity,
/// resonant dynamics vs closed forms, fidelity scan, routing, multiplexing,
/// amplitude laws, oracle equivalence, band statistics, lattice closed
/// forms). Results stream to `progress` as they finish when given.
std::vector<CheckResult> run_verification(unsigned seed = 20250811,
                                          std::ostream* progress = nullptr);

/// True when every check passed.
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace starwell
