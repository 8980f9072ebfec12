// Acceptance gate: one line per criterion, nonzero exit on any failure.

#include <cstdio>

#include "plk/plk.hpp"

int main() {
  const auto results = plk::run_acceptance_suite();
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s  %2d  %-40s  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                r.detail.c_str());
    if (!r.passed) all = false;
  }
  std::printf("%s\n", all ? "acceptance: all criteria passed"
                          : "acceptance: at least one criterion failed");
  return all ? 0 : 1;
}
