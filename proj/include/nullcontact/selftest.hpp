#pragma once

// Analytic-oracle suite behind the `selftest` command and the acceptance
// binary. Checks are grouped by acceptance criterion (1..9).

#include <string>
#include <vector>

namespace nc {

struct SelftestOptions {
  bool quick = false;
  // Relative tolerance for traced rotation angles against the closed form.
  double traced_rel_tol = 1e-4;
};

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured error or quantity
  double threshold = 0.0;  // the bound it is held to
  std::string detail;
  double seconds = 0.0;
};

std::vector<CheckResult> run_selftest(const SelftestOptions& options = {});

// Fixed-width pass/fail table, one line per check plus a summary line.
std::string selftest_table(const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace nc
