#pragma once

// Orlicz gauge functions and the induced norm on weighted samples.

#include <Eigen/Dense>

#include "robustkit/common.hpp"
#include "robustkit/empirical_dist.hpp"

namespace robustkit {

enum class OrliczKind { Power, Exponential, SubGaussian };

// A convex increasing gauge psi with psi(0) = 0, together with its
// closed-form inverse. Three families:
//   Power(k):     psi(x) = x^k            psi_inv(y) = y^(1/k)      (k >= 1)
//   Exponential:  psi(x) = exp(x) - 1     psi_inv(y) = log(1+y)
//   SubGaussian:  psi(x) = exp(x^2) - 1   psi_inv(y) = sqrt(log(1+y))
// Construction re-validates convexity/monotonicity/psi(0)=0 on a sample grid
// by second differences, so a future family added with a typo fails fast.
class OrliczFunction {
 public:
  static OrliczFunction power(double k);
  static OrliczFunction exponential();
  static OrliczFunction subgaussian();

  double psi(double x) const;      // x >= 0; may return +inf on overflow
  double psi_inv(double y) const;  // y >= 0

  OrliczKind kind() const { return kind_; }
  double power_order() const { return k_; }
  std::string name() const;

 private:
  OrliczFunction(OrliczKind kind, double k);
  void validate() const;
  OrliczKind kind_;
  double k_;  // order for Power, unused otherwise
};

// Orlicz norm of the scalar sample {(f_i, w_i)}:
//   inf { t > 0 : sum_i w_i psi(|f_i| / t) <= 1 }
// computed by bisection to relative tolerance 1e-8 (upper bracket found by
// doubling). Returns 0 when f == 0 a.s.; throws NonFinite on non-finite
// values; NoConvergence if bracketing fails.
double orlicz_norm(const Eigen::VectorXd& values, const Eigen::VectorXd& weights,
                   const OrliczFunction& psi);
// Same, reading values and weights from a 1-d distribution.
double orlicz_norm(const EmpiricalDist& p, const OrliczFunction& psi);

}  // namespace robustkit
