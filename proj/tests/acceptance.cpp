// Acceptance gate: runs the full property suite at its reference
// configuration and prints one pass/fail line per numbered criterion.
// Exit status 0 iff every criterion passes.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <map>
#include <string>
#include <vector>

#include "bek/verify.hpp"

namespace {

const char* kCriterionName[9] = {
    nullptr,
    "ellipse-measure oracle",
    "collision-frequency growth",
    "operator structure",
    "hydrodynamic constants",
    "exact solutions",
    "half-space structure suite",
    "uniqueness cross-validation",
    "transport resolvent",
};

}  // namespace

int main() {
  std::vector<bek::Check> checks;
  try {
    checks = bek::verify_suite(bek::VerifySetup{});
  } catch (const std::exception& e) {
    std::printf("[FAIL] suite aborted: %s\n", e.what());
    return 1;
  }

  std::map<int, std::vector<const bek::Check*>> groups;
  for (const bek::Check& c : checks) {
    const int k = c.name.empty() ? 0 : c.name[0] - '0';
    groups[(k >= 1 && k <= 8) ? k : 0].push_back(&c);
  }

  bool all = true;
  for (int k = 1; k <= 8; ++k) {
    const auto it = groups.find(k);
    bool pass = it != groups.end();
    double elapsed = 0.0;
    if (pass)
      for (const bek::Check* c : it->second) {
        pass = pass && c->pass;
        elapsed = std::max(elapsed, c->group_elapsed_s);
      }
    std::printf("[%s] Criterion %d: %s (%zu checks, %.1fs)\n",
                pass ? "PASS" : "FAIL", k, kCriterionName[k],
                it == groups.end() ? size_t{0} : it->second.size(), elapsed);
    if (!pass && it != groups.end())
      for (const bek::Check* c : it->second)
        if (!c->pass)
          std::printf("       %-28s measured=%.6e bound=%.6e %s\n",
                      c->name.c_str(), c->measured, c->bound,
                      c->detail.c_str());
    all = all && pass;
  }
  for (const bek::Check* c : groups[0]) {
    std::printf("[FAIL] unclassified check: %s\n", c->name.c_str());
    all = false;
  }

  std::printf("%s\n", all ? "ACCEPTANCE: all criteria passed"
                          : "ACCEPTANCE: FAILURES PRESENT");
  return all ? 0 : 1;
}
