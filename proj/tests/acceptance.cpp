// Integration gate: runs every verification check once and prints one
// pass/fail line per check. Exit code 1 when any check fails.
#include <cstdlib>
#include <iostream>

#include "starwell/verification.hpp"

int main(int argc, char** argv) {
  unsigned seed = 20250811;
  if (argc > 1) seed = static_cast<unsigned>(std::strtoul(argv[1], nullptr, 10));
  const auto results = starwell::run_verification(seed, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.pass ? 0 : 1;
  std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
            << " checks passed\n";
  return failed == 0 ? 0 : 1;
}
