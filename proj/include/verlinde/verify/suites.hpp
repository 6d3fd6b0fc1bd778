#pragma once

// Self-verification suites shared by the CLI `verify` subcommand and the
// acceptance test.

#include "verlinde/cohft.hpp"

#include <string>
#include <vector>

namespace verlinde::verify {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // expected/actual on failure, a short summary otherwise
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  double seconds = 0;
  double budget_seconds = 0;  // 0: no time bound

  bool passed() const;
  std::size_t failures() const;
};

/// ranks, slope, prop52, twoloop, symplectic, graphs, properties.
const std::vector<std::string>& suite_names();

/// Runs one suite by name; "all" is not accepted here. Throws InvalidInput
/// for unknown names.
SuiteReport run_suite(const std::string& name, const EvalOptions& opts = {});

/// Runs every suite, or the single named one.
std::vector<SuiteReport> run_suites(const std::string& name, const EvalOptions& opts = {});

}  // namespace verlinde::verify
