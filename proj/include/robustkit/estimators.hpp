#pragma once

// Projection estimators: robust mean (1-d and high-d), spectral filters,
// W1 moment projection for second moments, and robust linear regression
// under both corruption metrics.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "robustkit/common.hpp"
#include "robustkit/empirical_dist.hpp"
#include "robustkit/orlicz.hpp"

namespace robustkit {

// Hard cap on the sample mass any estimator is allowed to delete or
// downweight; exceeding it raises BudgetExceeded.
inline constexpr double kMassCap = 0.45;

struct EstimatorConfig {
  double eps = 0.0;                  // assumed corruption level, in [0, 0.45]
  double sigma = 1.0;                // scale the moment constraints use
  OrliczFunction psi = OrliczFunction::power(2);
  int k = 4;                         // moment order (k-th moment routines)
  double R = 1e6;                    // regression parameter-norm cap
  int direction_budget = 256;        // scan directions for high-d routines
  RngSeed seed = 1;
};

struct EstimatorReport {
  Eigen::VectorXd estimate;          // mean / theta; 1x1 for scalar tasks
  Eigen::MatrixXd second_moment;     // filled by second-moment routines
  EmpiricalDist projected;           // the q the estimator projected onto
  double mass_removed = 0.0;         // deleted/downweighted input mass
  double transport_spent = 0.0;      // W1 routines: exact sum w_i |x_i - y_i|
  int iterations = 0;
  // Sup over scan directions of |v' estimate - per-direction estimate|,
  // reported by the direction-aggregation mean (certificate of the min-max).
  double aggregation_gap = 0.0;
};

// 1-d robust mean: project the sample onto the trimmed-moment set
//   { q : E_q psi((X - mu_q)^2 / (4 sigma^2)) <= 4 }
// by symmetric two-sided tail deletion, bisecting on the total deleted mass
// (tolerance 1e-6). Returns the projected sample's mean.
EstimatorReport robust_mean_1d(const EmpiricalDist& p1d, const EstimatorConfig& cfg);

// High-d robust mean: run robust_mean_1d along scan directions (budget
// random + axes + top-3 covariance eigenvectors), then aggregate by
//   argmin_mu  max_v |v'mu - mu_v|
// via subgradient descent with 20 restarts and step c/sqrt(iter); the final
// sup-gap is certified across restarts (spread <= 1e-4).
EstimatorReport robust_mean_highd(const EmpiricalDist& p, const EstimatorConfig& cfg);

// Spectral filter for bounded-covariance data: while the top eigenvalue of
// the weighted covariance exceeds sigma^2 (1 + 2 epstilde), downweight
// points by c_i *= (1 - tau_i / tau_max) with tau_i the squared projection
// of the centering residual on the top eigenvector. epstilde = eps plus a
// finite-sample allowance d log(d+1) / n.
EstimatorReport filter_mean(const EmpiricalDist& p, const EstimatorConfig& cfg);

// Same loop for whitened data with identity covariance and bounded k-th
// moments (k > 2): threshold 1 + c1 epstilde^(1 - 2/k) + c2 sqrt(d log d / n)
// on the top eigenvalue.
EstimatorReport filter_mean_isotropic_kth(const EmpiricalDist& p,
                                          const EstimatorConfig& cfg);

// W1 projection for second moments: move points the least total transport
// needed to satisfy the directional moment constraint
//   sup_v E_q |v'y|^k <= 2 sigma^k.
// Alternates worst-direction search (projected gradient ascent on the
// sphere) with 1-d clipping along that direction, the clip level chosen by
// bisection as the largest tau restoring the constraint. At most 200 rounds;
// transport accounting is exact.
EstimatorReport w1_project_moment(const EmpiricalDist& p, const EstimatorConfig& cfg);

// Robust linear regression under TV corruption: iteratively reweighted
// least squares where the weighted second moment of the per-point gradients
// g_i = x_i z_i (z = residual) drives a spectral filter on the weights;
// stops when the top gradient eigenvalue stabilizes or the mass cap binds.
// The last column of joint_xy is the response. ||theta|| is clipped to R.
EstimatorReport robust_linreg_tv(const EmpiricalDist& joint_xy,
                                 const EstimatorConfig& cfg);

// Robust linear regression under W1 corruption: project the joint (x, y)
// sample onto the bounded k-th directional moment set at scale
// sigma * max(R, 1), then ordinary least squares on the projected sample;
// ||theta|| clipped to R.
EstimatorReport robust_linreg_w1(const EmpiricalDist& joint_xy,
                                 const EstimatorConfig& cfg);

// Plain weighted OLS baseline (min-norm solve on rank-deficient designs).
Eigen::VectorXd ols_theta(const EmpiricalDist& joint_xy);

}  // namespace robustkit
