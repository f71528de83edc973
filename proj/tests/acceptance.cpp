// Acceptance gate: one PASS/FAIL line per criterion. Criteria 1-9 come from
// the oracle suite; criterion 10 times the full and quick runs.

#include <chrono>
#include <cstdio>
#include <map>

#include "nullcontact/selftest.hpp"

namespace {

const char* const kCriteria[] = {
    "",
    "rotation angle: closed form, quadrature and tracing agree on the ellipsoid family",
    "unit ball anchor 2pi(sqrt2 - 1) within 1e-6",
    "boosted and translated ball reproduces the ball angle within 1e-3",
    "diamond: singular set, identity return map, distinguished from the ball",
    "chart foliation and traced leaves colinear within 1e-6 rad; singular sets agree",
    "lightlike latitudes of 5 ellipsoids within 1e-10",
    "convexity checker: ball passes at 4 +- 1e-9, flat waist and two-ball union fail",
    "dividing set: 2 transverse, separating components at t = 0",
    "properties: Legendrian skies, monotone time, no closed leaves, conjugacy, monotone angle(e)",
    "full selftest < 60 s, quick subset < 10 s",
};

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

int main() {
  auto start = std::chrono::steady_clock::now();
  const auto full = nc::run_selftest({});
  const double full_s = seconds_since(start);
  start = std::chrono::steady_clock::now();
  nc::SelftestOptions quick_opts;
  quick_opts.quick = true;
  const auto quick = nc::run_selftest(quick_opts);
  const double quick_s = seconds_since(start);

  std::map<int, bool> ok;
  std::map<int, int> count;
  for (int c = 1; c <= 9; ++c) ok[c] = true;
  for (const auto& r : full) {
    ok[r.criterion] = ok[r.criterion] && r.passed;
    ++count[r.criterion];
  }

  std::fputs(nc::selftest_table(full).c_str(), stdout);
  std::puts("");
  bool all = true;
  for (int c = 1; c <= 9; ++c) {
    const bool pass = ok[c] && count[c] > 0;
    all = all && pass;
    std::printf("%s criterion %d: %s (%d checks)\n", pass ? "PASS" : "FAIL", c, kCriteria[c], count[c]);
  }
  const bool timing = full_s < 60.0 && quick_s < 10.0 && nc::all_passed(quick);
  all = all && timing;
  std::printf("%s criterion 10: %s (full %.2f s, quick %.2f s)\n", timing ? "PASS" : "FAIL", kCriteria[10], full_s,
              quick_s);
  return all ? 0 : 1;
}
