#pragma once

// Statistical distances between weighted samples: total variation,
// Kolmogorov-Smirnov, Wasserstein-1, and their witness-restricted
// (weakened) variants.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "robustkit/common.hpp"
#include "robustkit/direction.hpp"
#include "robustkit/empirical_dist.hpp"

namespace robustkit {

// What certifies a reported distance value. Exactly one layout per metric:
//   tv:       event = list of atoms A with p-mass > q-mass; value = P_p(A)-P_q(A)
//   ks:       threshold t; value = |P_p(X > t) - P_q(X > t)|
//   tvtilde:  direction(s) + threshold on the projected scalars
//   w1:       explicit transport plan rows (x, y, mass); value = sum m*|x-y|
//   w1tilde:  direction + (linear mean witness | ReLU knee a)
struct DistanceWitness {
  std::string metric;
  Eigen::VectorXd v;           // primary direction (empty if n/a)
  Eigen::VectorXd v2;          // second leg for QuadDiff (empty if n/a)
  double threshold = 0.0;      // ks/tvtilde threshold, w1tilde ReLU knee
  bool linear = false;         // w1tilde: witness is the linear functional
  Eigen::MatrixXd event;       // tv: atoms of the witness event, row-major
  Eigen::MatrixXd plan_x, plan_y;  // w1: coupled points
  Eigen::VectorXd plan_m;          // w1: coupled masses
};

struct DistanceReport {
  double value = 0.0;
  DistanceWitness witness;
};

// Recompute the value a witness claims, from scratch. Every distance routine
// guarantees |reevaluate(report.witness, p, q) - report.value| <= 1e-9.
double reevaluate_witness(const DistanceWitness& w, const EmpiricalDist& p,
                          const EmpiricalDist& q);

// Total variation between discrete samples; atoms are merged
// coordinate-wise with tolerance 1e-12 before comparing masses.
DistanceReport tv_discrete(const EmpiricalDist& p, const EmpiricalDist& q);

// One-dimensional Kolmogorov-Smirnov distance (sup over thresholds of the
// CDF gap), exact by a merged sweep.
DistanceReport ks_1d(const EmpiricalDist& p, const EmpiricalDist& q);

// Weakened TV: sup over the projection family of the 1-d KS distance of the
// projected samples, then hill-climb refinement of the best direction
// (100 steps of sphere-projected coordinate perturbation).
DistanceReport tvtilde(const EmpiricalDist& p, const EmpiricalDist& q,
                       const ProjectionFamily& fam);

// Exact 1-d Wasserstein-1 via the quantile coupling.
DistanceReport w1_1d(const EmpiricalDist& p, const EmpiricalDist& q);

// Weakened W1: sup over unit directions v of
//   max( |E_p v'X - E_q v'X| , sup_a |E_p relu(v'X-a) - E_q relu(v'X-a)| )
// with the inner sup evaluated exactly at every projected sample value
// (plus the +-inf limits, which reduce to the linear witness), then
// hill-climb refinement of the best direction.
DistanceReport w1tilde(const EmpiricalDist& p, const EmpiricalDist& q,
                       const std::vector<Eigen::VectorXd>& dirs);
// Convenience: default direction budget (256 random + axes).
DistanceReport w1tilde(const EmpiricalDist& p, const EmpiricalDist& q,
                       RngSeed seed = 1, int budget = 256);

}  // namespace robustkit
