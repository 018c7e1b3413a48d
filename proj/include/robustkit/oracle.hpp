#pragma once

// Small-instance oracles: exhaustive worst-case deletion, convex-order
// certification, constrained pair generation for modulus checks, and the
// friendly-perturbation certificate.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "robustkit/common.hpp"
#include "robustkit/empirical_dist.hpp"
#include "robustkit/orlicz.hpp"

namespace robustkit {

// Exact worst-case eta-deletion mean shift for tiny samples (n <= 15,
// d <= 3; larger inputs throw TooLarge). The deletion polytope
// {0 <= delta_i <= w_i, sum delta_i = eta} has vertices with at most one
// fractional atom, and the renormalized mean is linear in delta, so
// enumerating subsets plus one boundary atom is exact for d = 1. For
// d in {2, 3} the worst direction is found by a dense scan (4096 unit
// directions) with the exact 1-d oracle on each projection.
struct ExhaustiveDeletionResult {
  double gap = 0.0;               // max ||mean(r) - mean(p)||_2 over deletions
  Eigen::VectorXd deleted_mass;   // per-atom deleted mass at the maximizer
  Eigen::VectorXd witness_dir;    // direction realizing the gap (d > 1)
};
ExhaustiveDeletionResult exhaustive_worst_deletion(const EmpiricalDist& p,
                                                   double eta);

// Does rp precede rq in the convex order? Checks equal means (tol 1e-9) and
// E_{rp}(z - X)_+ <= E_{rq}(z - X)_+ at every merged support point z; on
// success additionally certifies E_{rp} f <= E_{rq} f for `n_test` random
// piecewise-linear convex f.
struct ConvexOrderResult {
  bool ok = false;
  double mean_gap = 0.0;
  double worst_violation = 0.0;  // max over z of the integrated-CDF excess
  double witness_z = 0.0;        // where the violation happened (if any)
};
ConvexOrderResult convex_order_check(const EmpiricalDist& rp,
                                     const EmpiricalDist& rq, int n_test = 50,
                                     RngSeed seed = 5);

// Generates pairs (p1, p2) of small 1-d samples that are TV-close (within
// 2*eps) and certified members of a constrained class, for modulus checks:
//   Resilience: both sides' exhaustive worst-deletion gap at eta = 2*eps is
//     within rho (proposals shrink toward the mean until certified);
//   Moment: both sides' centered Orlicz norm is within sigma.
// Throws GenerationStarved if the acceptance rate falls below 0.1%.
struct ModulusConstraint {
  enum class Kind { Resilience, Moment };
  Kind kind = Kind::Resilience;
  double rho = 1.0;     // Resilience
  double sigma = 1.0;   // Moment
  OrliczFunction psi = OrliczFunction::power(2);
};
struct ModulusPair {
  EmpiricalDist p1;
  EmpiricalDist p2;
  double tv = 0.0;        // certified TV(p1, p2) <= 2 eps
  double bound = 0.0;     // certified bound on |mean(p1) - mean(p2)|
};
std::vector<ModulusPair> modulus_property_generator(const ModulusConstraint& c,
                                                    double eps, int count,
                                                    RngSeed seed);

// Explicit coupling rows for the friendly-perturbation certificate.
struct CouplingPair {
  Eigen::VectorXd x;  // point of p
  Eigen::VectorXd y;  // point of r
  double mass = 0.0;
};

// Certifies that r is a friendly perturbation of p at cost eta for the
// scalar index f (identity or abs of the 1-d value): the supplied coupling
// must have marginals p and r, total move cost sum m ||x - y|| <= eta, and
// every pair must satisfy betweenness: f(y) lies between f(x) and E_r f.
struct FriendlyCheckResult {
  bool ok = false;
  double cost = 0.0;
  int violating_pair = -1;  // first betweenness violation, -1 if none
  std::string reason;
};
enum class ScalarIndex { Identity, Abs };
FriendlyCheckResult friendly_perturbation_check(const EmpiricalDist& p,
                                                const EmpiricalDist& r,
                                                const std::vector<CouplingPair>& pairs,
                                                ScalarIndex f, double eta);

}  // namespace robustkit
