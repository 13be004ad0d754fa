// Standalone acceptance gate: runs every criterion (or the one named on the
// command line) and prints one verdict line each. Exits nonzero when any
// criterion fails.
#include <cstdio>
#include <cstdlib>

#include "stefanlab/acceptance.hpp"

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 8) {
      std::fprintf(stderr, "usage: %s [criterion number 1..8]\n", argv[0]);
      return 2;
    }
  }

  bool all = true;
  for (const auto& r : stefanlab::acceptance::run_acceptance(only)) {
    std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds, r.detail.empty() ? "" : " ",
                r.detail.c_str());
    all = all && r.passed;
  }
  return all ? 0 : 1;
}
