#pragma once

// Corruption generators: oblivious and adaptive TV contamination,
// budgeted W1 transport attacks, and the informative-direction deletion
// construction for regression lower bounds.

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "robustkit/common.hpp"
#include "robustkit/empirical_dist.hpp"

namespace robustkit {

// Draws one point (row vector) per call.
using PointSampler = std::function<Eigen::VectorXd(std::mt19937_64&)>;

struct CorruptionReceipt {
  std::string metric;    // "tv" | "w1"
  std::string model;     // "oblivious" | "adaptive" | "w1" | "dimension_delete"
  std::string strategy;  // empty for oblivious
  double eps = 0.0;      // requested budget
  // Distance between the paired clean and corrupted samples where a clean
  // sample exists (adaptive TV: replaced mass; W1: total transport). The
  // oblivious model has no paired clean sample, so it records the
  // population-level mixture budget eps instead.
  double achieved = 0.0;
  int affected = 0;          // points replaced / moved (nonzero transport)
  double affected_mass = 0.0;
  RngSeed seed = 0;
};

struct CorruptionResult {
  EmpiricalDist corrupted;
  CorruptionReceipt receipt;
};

// Oblivious contamination: n i.i.d. draws from (1-eps) clean + eps
// contaminant, mixed per-draw (so the contaminated count is Binomial(n, eps)).
CorruptionResult corrupt_tv_oblivious(const PointSampler& clean,
                                      const PointSampler& contaminant, int d,
                                      double eps, int n, RngSeed seed);

// Adaptive TV strategies (replace exactly k = ceil(eps * n) points, chosen
// after inspecting the sample):
//   ShiftCluster: params {direction v, magnitude m}; a seeded-random subset
//     is replaced by the single point m*v.
//   MeanPull: params {target t}; the k points whose removal moves the plain
//     mean toward t the most are replaced by t itself.
//   TailMimic: params {}; replacements sit on the (1-eps)-quantile radius
//     shell around the mean, all along one seeded direction, so norm-based
//     filters see typical radii.
struct AdaptiveTvStrategy {
  enum class Kind { ShiftCluster, MeanPull, TailMimic };
  Kind kind = Kind::ShiftCluster;
  Eigen::VectorXd direction;  // ShiftCluster
  double magnitude = 0.0;     // ShiftCluster
  Eigen::VectorXd target;     // MeanPull
  static AdaptiveTvStrategy shift_cluster(Eigen::VectorXd v, double m);
  static AdaptiveTvStrategy mean_pull(Eigen::VectorXd target);
  static AdaptiveTvStrategy tail_mimic();
  // "shift_cluster:v1,..,vd,m" | "mean_pull:t1,..,td" | "tail_mimic"
  static AdaptiveTvStrategy parse(const std::string& text, int d);
  std::string name() const;
};
CorruptionResult corrupt_tv_adaptive(const EmpiricalDist& clean, double eps,
                                     const AdaptiveTvStrategy& strategy,
                                     RngSeed seed);

// W1 transport attacks; every strategy saturates the budget exactly:
// sum_i w_i ||x_i - y_i|| == eps (within 1e-12).
//   UniformShift: params {direction v}; every point moves by eps * v.
//   RadialInflate: all points move away from the mean, proportionally.
//   TopK: params {direction v, k}; the k largest-|v'x| points move outward
//     along sign(v'x) * v, sharing the budget equally per unit mass.
struct W1Strategy {
  enum class Kind { UniformShift, RadialInflate, TopK };
  Kind kind = Kind::UniformShift;
  Eigen::VectorXd direction;
  int k = 1;
  static W1Strategy uniform_shift(Eigen::VectorXd v);
  static W1Strategy radial_inflate();
  static W1Strategy top_k(Eigen::VectorXd v, int k);
  // "uniform_shift:v1,..,vd" | "radial_inflate" | "top_k:v1,..,vd,k"
  static W1Strategy parse(const std::string& text, int d);
  std::string name() const;
};
CorruptionResult corrupt_w1(const EmpiricalDist& clean, double eps,
                            const W1Strategy& strategy, RngSeed seed);

// Deletes the informative direction of a regression sample produced by the
// two-atom construction (mass eps at x = b carrying all the signal, mass
// 1-eps at x = 0): every atom with x != 0 is collapsed to the origin in both
// x and y. The observed sample is then indistinguishable from pure noise
// while the TV budget spent is exactly the informative mass.
CorruptionResult adversary_dimension_delete(const EmpiricalDist& joint_xy,
                                            double eps);

// Largest informative-atom location b with the two-atom design still
// sub-gaussian at scale sigma: b = sigma * sqrt(log(1 + 1/eps)).
double dimension_delete_atom(double sigma, double eps);

}  // namespace robustkit
