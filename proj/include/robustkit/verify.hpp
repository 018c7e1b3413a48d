#pragma once

// Randomized self-verification suites for the structural guarantees the
// library rests on. Each suite generates instances, checks the certified
// inequality against an independent computation, and reports violations
// with enough detail to reproduce them.

#include <string>
#include <vector>

#include "robustkit/common.hpp"

namespace robustkit {

struct VerifySuiteResult {
  std::string suite;
  int checked = 0;     // individual inequalities tested
  int violations = 0;
  std::vector<std::string> failures;  // "suite,index,detail" rows
  double elapsed_ms = 0.0;
};

// Suites (instance counts in parentheses are the defaults used when
// count <= 0):
//   deletion     (500)  greedy 1-d worst deletion == exhaustive vertex oracle
//   midpoint     (1000) TV midpoint is the maximal common deletion
//   meancross_tv (1000) KS-close pairs: deletions cross in the CDF order
//   meancross_w1 (500)  weakened-W1-close pairs: convex-order transports
//                        within 7x the budget
//   orlicz       (500)  measured deletion gap within the Orlicz resilience
//                        bound at eta in {0.05, 0.1, 0.25}, psi in
//                        {power:2, power:4}
//   tail         (500)  exact resilience implies both one-sided tail bounds
//   closure      (200)  deletions of resilient samples stay resilient (2x)
//   modulus      (1000) TV-close constrained pairs have mean gap within the
//                        certified two-sided resilience bound
//   friendly     (50)   constructed couplings pass/fail the friendly
//                        perturbation certificate as expected
VerifySuiteResult run_verify_suite(const std::string& name, int count, RngSeed seed);

std::vector<std::string> verify_suite_names();
std::vector<VerifySuiteResult> run_all_verify_suites(RngSeed seed);

}  // namespace robustkit
