#pragma once

// Unit directions and the projection families the weakened distances
// optimize over.

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "robustkit/common.hpp"
#include "robustkit/empirical_dist.hpp"

namespace robustkit {

// Unit vector (l2 norm 1 within 1e-10; construction rejects otherwise).
class Direction {
 public:
  explicit Direction(Eigen::VectorXd v);
  static Direction normalized(Eigen::VectorXd v);  // scales to unit norm
  const Eigen::VectorXd& v() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }

 private:
  Eigen::VectorXd v_;
};

// Seeded draw of a uniform unit vector (gaussian normalized).
Eigen::VectorXd random_unit(int d, std::mt19937_64& rng);
// count random unit vectors plus the coordinate axes.
std::vector<Eigen::VectorXd> sphere_sample_with_axes(int d, int count, RngSeed seed);

// Family of scalar test maps used by the weakened distances:
//   Linear:   x -> v'x over a list of unit directions
//   QuadDiff: x -> (v1'x)^2 - (v2'x)^2 over pairs; pairs with one zero leg
//             ((v,0) and (0,v)) are always included so plain squares stay
//             in the family.
struct ProjectionFamily {
  enum class Kind { Linear, QuadDiff };

  Kind kind = Kind::Linear;
  std::vector<Eigen::VectorXd> dirs;                                // Linear
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs;   // QuadDiff

  int size() const;
  // Projected scalar values of every atom of p under member idx.
  Eigen::VectorXd evaluate(const EmpiricalDist& p, int idx) const;

  // count random directions + coordinate axes.
  static ProjectionFamily linear(int d, int count, RngSeed seed);
  static ProjectionFamily linear_fixed(std::vector<Eigen::VectorXd> dirs);
  // count random (v1, v2) pairs + all one-legged pairs (v,0), (0,v) over
  // count random v and the axes.
  static ProjectionFamily quad_diff(int d, int count, RngSeed seed);
};

}  // namespace robustkit
