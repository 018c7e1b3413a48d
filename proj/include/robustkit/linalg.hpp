#pragma once

// Symmetric eigen utilities built on seeded power iteration.

#include <Eigen/Dense>
#include <vector>

#include "robustkit/common.hpp"

namespace robustkit {

struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;  // unit norm; sign fixed: largest-|entry| positive
  int iterations = 0;
};

// Largest (algebraic) eigenvalue and eigenvector of a symmetric matrix.
// Dimensions up to 64 use a dense symmetric eigensolve; beyond that, shifted
// power iteration with a seeded random start runs until the residual
// ||Mv - lambda v|| drops below 1e-10 * max(1, |lambda|), falling back to
// the dense solve if a tight spectral gap starves it. Deterministic for a
// given matrix; the returned vector's largest component is made positive.
EigenPair top_eigenpair(const Eigen::MatrixXd& M, RngSeed seed = 7,
                        int max_iters = 10000);

// Top-k eigenpairs by repeated deflation M <- M - lambda v v'.
std::vector<EigenPair> top_k_eigenpairs(const Eigen::MatrixXd& M, int k,
                                        RngSeed seed = 7, int max_iters = 10000);

// Spectral (operator) norm of a symmetric matrix: max(|lambda_max|, |lambda_min|),
// both ends obtained with top_eigenpair.
double spectral_norm_sym(const Eigen::MatrixXd& M, RngSeed seed = 7);

}  // namespace robustkit
