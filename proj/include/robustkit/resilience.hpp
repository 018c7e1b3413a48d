#pragma once

// Deletion resilience: worst-case trims, resilience profiles, the
// Orlicz-norm resilience bound, and the midpoint / mean-crossing
// constructions that drive the indistinguishability arguments.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "robustkit/common.hpp"
#include "robustkit/direction.hpp"
#include "robustkit/distances.hpp"
#include "robustkit/empirical_dist.hpp"
#include "robustkit/orlicz.hpp"

namespace robustkit {

// Worst-case eta-deletion of a 1-d sample. Deleting mass eta and
// renormalizing moves the mean the furthest when the deletion takes a tail
// wholesale (largest values to push the mean down, smallest to push it up),
// with one fractional atom at the boundary. Returns both one-sided trims.
struct TrimResult {
  double plain_mean = 0.0;
  double mean_after_upper_trim = 0.0;  // eta deleted from the largest values
  double mean_after_lower_trim = 0.0;  // eta deleted from the smallest values
  double gap = 0.0;  // max |trimmed mean - plain mean| over the two trims
  EmpiricalDist r_upper_trim;  // renormalized remainder, upper tail deleted
  EmpiricalDist r_lower_trim;
};
TrimResult worst_deletion_1d(const EmpiricalDist& p, double eta);

// rho_hat(eta) = max over scan directions of the 1-d worst-deletion gap of
// the projected sample. Directions: `budget` random + coordinate axes +
// top-3 covariance eigenvectors. Profile is nondecreasing in eta and 0 at 0.
struct ResilienceProfile {
  std::vector<double> etas;
  std::vector<double> rho;
  std::vector<Eigen::VectorXd> witness_dirs;
};
ResilienceProfile resilience_profile(const EmpiricalDist& p,
                                     const std::vector<double>& etas,
                                     int budget = 256, RngSeed seed = 17);

// Resilience radius implied by a bounded centered Orlicz norm sigma:
//   rho(eta) = min( sigma * eta * psi_inv(1/eta) / (1 - eta),
//                   sigma * psi_inv(1/(1 - eta)) )
double orlicz_resilience_bound(double sigma, const OrliczFunction& psi, double eta);

// Checks both one-sided tail bounds implied by (rho, eta)-resilience of the
// scalar sample: P(+-(f - E f) > (1-eta) rho / eta) <= eta. The event is
// strict: deleting the top eta mass moves the mean by strictly more than rho
// only when the tail strictly exceeds the threshold, so equality cases are
// genuinely allowed at exact resilience (a single-atom tail slice sits at
// the threshold identically). The comparison carries a 1e-9 relative guard
// so such equality atoms are not miscounted through rounding.
struct TailBoundResult {
  bool ok = false;
  double threshold = 0.0;   // (1-eta) rho / eta
  double upper_mass = 0.0;  // P(f - Ef > threshold)
  double lower_mass = 0.0;  // P(Ef - f > threshold)
};
TailBoundResult tail_bound_check(const Eigen::VectorXd& values,
                                 const Eigen::VectorXd& weights, double rho,
                                 double eta);
TailBoundResult tail_bound_check(const EmpiricalDist& p1d, double rho, double eta);

// Common deletion of two TV-close samples: r = min(p, q) / (1 - TV) on the
// merged support. r is an eta-deletion of both sides with eta = TV(p, q).
// Throws DisjointSupports when TV = 1 (within 1e-12).
struct MidpointResult {
  EmpiricalDist r;
  double tv = 0.0;  // TV(p, q), the deletion level certified for both sides
};
MidpointResult tv_midpoint(const EmpiricalDist& p, const EmpiricalDist& q);

// Mean-crossing deletions for KS-close 1-d samples: delete eps from the top
// of p and eps from the bottom of q. If KS(p, q) <= eps the results satisfy
// F_{r_p} >= F_{r_q} pointwise (so mean(r_p) <= mean(r_q)) while each side
// deleted exactly eps mass. Throws PreconditionViolated when KS > eps.
struct MeanCrossTvResult {
  EmpiricalDist r_p;
  EmpiricalDist r_q;
  double ks = 0.0;  // measured KS(p, q)
};
MeanCrossTvResult mean_cross_tv(const EmpiricalDist& p, const EmpiricalDist& q,
                                double eps);

// Index map applied before the convex-order construction below.
enum class IndexFn { Identity, Abs };

// Convex-order-comparable transports for W1-indistinguishable 1-d samples.
// Writing g for the index map and eps for the weakened-W1 budget, returns
// r_p, r_q supported in g-space with
//   W1(g#p, r_p) <= 7 eps + 1e-9,   W1(g#q, r_q) <= 7 eps + 1e-9,
// and r_p dominated by r_q in the convex order (equal means; every convex
// test function sees r_p below r_q). The p side is squeezed (far-tail
// winsorization to align means, then symmetric winsorization or collapse to
// the mean); the q side is returned untouched. Winsorization thresholds are
// solved by bisection to absolute tolerance 1e-10.
struct MeanCrossW1Result {
  EmpiricalDist r_p;
  EmpiricalDist r_q;
  double cost_p = 0.0;  // W1(g#p, r_p), exact transport accounting
  double cost_q = 0.0;  // W1(g#q, r_q)
  bool collapsed = false;  // true when the squeezed side became a point mass
};
MeanCrossW1Result mean_cross_w1(const EmpiricalDist& p, const EmpiricalDist& q,
                                double eps, IndexFn g = IndexFn::Identity);

// Closure of resilience under deletion: if p is (rho, eta(2-eta))-resilient
// then any eta-deletion r of p is (2 rho, eta)-resilient. Checks the factor
// on `trials` random eta-deletions, comparing r's worst-deletion gap at eta
// against twice p's at eta(2-eta).
struct ClosureCheckResult {
  bool ok = false;
  double worst_ratio = 0.0;  // max over trials of gap_r(eta) / gap_p(eta(2-eta))
};
ClosureCheckResult deletion_closure_check(const EmpiricalDist& p1d, double eta,
                                          int trials = 20, RngSeed seed = 23);

}  // namespace robustkit
