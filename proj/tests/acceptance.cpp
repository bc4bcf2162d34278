// One line per acceptance criterion. Each criterion runs its verification group
// on a fresh engine and cache, so timings include all intersection work.
#include "wpvol/verify.hpp"

#include <chrono>
#include <cstdio>
#include <iostream>

namespace {

struct Criterion {
  int id;
  const char* group;
  double budget_s;
  const char* what;
};

const Criterion kCriteria[] = {
    {1, "main-volumes", 5, "main-chamber volumes"},
    {2, "d04-chambers", 5, "all (0,4) chamber volumes and listed wall-crossings"},
    {3, "genus-one", 5, "(1,2) light chamber and 2pi limits"},
    {4, "d05-walls", 30, "(0,5) wall-crossings"},
    {5, "closed-forms", 180, "closed-form cross-checks"},
    {6, "limits", 120, "limit and dilaton identities"},
    {7, "intersections", 30, "intersection anchors and genus-0 closed form"},
    {8, "properties", 300, "continuity, path independence, quotient equivalence, positivity"},
    {9, "stress", 600, "non-main chamber of D_{2,2}"},
};

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  wpvol::VerifyOptions opt;
  opt.stress = {2, 2};
  int failed = 0;
  for (const auto& c : kCriteria) {
    const auto t0 = clock::now();
    std::vector<wpvol::CaseResult> cases;
    std::string crash;
    try {
      cases = wpvol::run_group(wpvol::verify_group(c.group), opt);
    } catch (const std::exception& e) {
      crash = e.what();
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    int bad = 0;
    const wpvol::CaseResult* first_bad = nullptr;
    for (const auto& r : cases) {
      if (!r.pass) {
        ++bad;
        if (!first_bad) first_bad = &r;
      }
    }
    const bool in_time = secs < c.budget_s;
    const bool pass = crash.empty() && !cases.empty() && bad == 0 && in_time;
    if (!pass) ++failed;
    std::printf("criterion %d: %s  %s  (%zu cases, %d failed, %.2f s of %.0f s budget)\n", c.id,
                pass ? "PASS" : "FAIL", c.what, cases.size(), bad, secs, c.budget_s);
    if (!crash.empty()) std::printf("  exception: %s\n", crash.c_str());
    if (!in_time) std::printf("  over the runtime budget\n");
    if (first_bad)
      std::printf("  first failure %s\n    expected: %s\n    computed: %s\n", first_bad->id.c_str(),
                  first_bad->expected.c_str(), first_bad->computed.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(kCriteria)) - failed, std::size(kCriteria));
  return failed == 0 ? 0 : 1;
}
