// Standalone acceptance runner: one pass/fail line per criterion, nonzero
// exit on any failure. `--tier fast` caps scales for quick iteration;
// `--tier full` runs everything at the pinned scales.

#include <cstring>
#include <iostream>
#include <string>

#include "paced/acceptance.hpp"

int main(int argc, char** argv) {
  std::string tier = "fast";
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--tier") == 0 && i + 1 < argc) {
      tier = argv[++i];
    } else {
      std::cerr << "usage: " << argv[0] << " [--tier fast|full]\n";
      return 2;
    }
  }
  if (tier != "fast" && tier != "full") {
    std::cerr << "tier must be fast or full\n";
    return 2;
  }
  const auto results = paced::run_acceptance_suite(
      tier == "full" ? paced::AcceptanceTier::Full : paced::AcceptanceTier::Fast, std::cout);
  const bool ok = paced::acceptance_passed(results);
  std::cout << (ok ? "acceptance: all criteria passed" : "acceptance: FAILURES above") << " ("
            << tier << " tier)\n";
  return ok ? 0 : 4;
}
