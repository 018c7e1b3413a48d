#pragma once

// Weighted finite sample: the basic carrier for every distance, trim and
// estimator in the library.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "robustkit/common.hpp"

namespace robustkit {

// A weighted point set {(x_i, w_i)} with w_i >= 0 and sum(w) == 1.
// Construction validates: finite entries, n >= 1, d >= 1, nonnegative
// weights summing to 1 within 1e-12. Weights below 1e-15 are dropped and the
// rest renormalized, so no zero-mass atoms survive construction.
class EmpiricalDist {
 public:
  EmpiricalDist(Eigen::MatrixXd points, Eigen::VectorXd weights);

  // Uniform weights 1/n.
  static EmpiricalDist uniform(Eigen::MatrixXd points);
  // Convenience for 1-d data.
  static EmpiricalDist uniform_1d(const std::vector<double>& xs);
  static EmpiricalDist weighted_1d(const std::vector<double>& xs,
                                   const std::vector<double>& ws);

  int n() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }
  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  // Scalar values v'x_i for every atom.
  Eigen::VectorXd project(const Eigen::VectorXd& v) const;
  // 1-d marginal along v as a distribution (weights preserved).
  EmpiricalDist project_dist(const Eigen::VectorXd& v) const;
  // Single-column view as scalar values; requires dim() == 1.
  Eigen::VectorXd values_1d() const;

  // Canonical row order (lexicographic by coordinates, then weight).
  // Estimators sort inputs through this so that estimates are invariant
  // bit-for-bit under row permutation.
  EmpiricalDist lex_sorted() const;

 private:
  Eigen::MatrixXd points_;   // n x d
  Eigen::VectorXd weights_;  // n, sums to 1
};

// Weighted mean sum w_i x_i.
Eigen::VectorXd weighted_mean(const EmpiricalDist& p);
// Weighted second moment  sum w_i x_i x_i'  (about the origin).
Eigen::MatrixXd weighted_second_moment(const EmpiricalDist& p);
// Weighted covariance  sum w_i (x_i - mu)(x_i - mu)'.
Eigen::MatrixXd weighted_covariance(const EmpiricalDist& p);

// CSV I/O. Expected header: x1,...,xd[,y][,w]. A "y" column, if present, is
// stored as the last coordinate of the points; a "w" column supplies
// weights (default uniform).
struct LoadedData {
  EmpiricalDist dist;
  bool has_response = false;  // true when a y column was present
};
LoadedData load_csv(const std::string& path);
void save_csv(const EmpiricalDist& p, const std::string& path,
              bool has_response = false, bool write_weights = false);

}  // namespace robustkit
