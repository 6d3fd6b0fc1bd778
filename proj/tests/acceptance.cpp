// One line per acceptance criterion, each held to its time limit.

#include "verlinde/verify/suites.hpp"

#include <cstdio>

int main() {
  using verlinde::verify::run_suite;
  struct Criterion {
    int number;
    const char* suite;
    const char* title;
  };
  const Criterion criteria[] = {
      {1, "ranks", "rank tables (sl2 level 1, sl_r level 1)"},
      {2, "slope", "smooth-locus slope formula"},
      {3, "prop52", "compact-type closed form for sl_r level 1"},
      {4, "twoloop", "two-loop dichotomy at (3,2)"},
      {5, "symplectic", "symplectic W-matrices, perturbation rejected"},
      {6, "graphs", "stable graph enumeration vs brute force"},
      {7, "properties", "equivariance, identity R, unit edges, canonical form"},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto report = run_suite(c.suite);
    const bool ok = report.passed();
    std::printf("%s criterion %d [%s] %s: %zu checks, %zu failed, %.3fs (limit %.0fs)\n",
                ok ? "PASS" : "FAIL", c.number, c.suite, c.title, report.checks.size(),
                report.failures(), report.seconds, report.budget_seconds);
    if (!ok) {
      ++failed;
      for (const auto& check : report.checks)
        if (!check.passed) std::printf("    %s: %s\n", check.name.c_str(), check.detail.c_str());
    }
  }
  return failed == 0 ? 0 : 1;
}
