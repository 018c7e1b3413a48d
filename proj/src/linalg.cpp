#include "robustkit/linalg.hpp"

#include <cassert>
#include <cmath>

namespace robustkit {

namespace {

void canonical_sign(Eigen::VectorXd& v) {
  int arg = 0;
  double best = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      arg = i;
    }
  }
  if (v[arg] < 0.0) v = -v;
}

}  // namespace

namespace {

EigenPair dense_top_eigenpair(const Eigen::MatrixXd& M) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
  if (solver.info() != Eigen::Success) throw NoConvergence("dense eigensolve failed");
  const int last = static_cast<int>(M.rows()) - 1;  // ascending eigenvalue order
  EigenPair out;
  out.value = solver.eigenvalues()[last];
  out.vector = solver.eigenvectors().col(last);
  canonical_sign(out.vector);
  out.iterations = 1;
  return out;
}

}  // namespace

EigenPair top_eigenpair(const Eigen::MatrixXd& M, RngSeed seed, int max_iters) {
  if (M.rows() != M.cols() || M.rows() < 1) throw DimensionMismatch("square matrix expected");
  if (!M.allFinite()) throw NonFinite("top_eigenpair input");
  const int d = static_cast<int>(M.rows());

  // Small matrices go straight to a dense solve: power iteration cannot
  // certify the top value when the leading eigenvalues nearly coincide, and
  // every hot path in this library works with d in the tens.
  if (d <= 64) return dense_top_eigenpair(M);

  // Shift so the algebraically largest eigenvalue is also largest in
  // magnitude: M + cI with c = max row absolute sum bounds |lambda_min|.
  const double shift = M.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  const Eigen::MatrixXd Ms = M + shift * Eigen::MatrixXd::Identity(d, d);

  auto rng = make_rng(split_seed(seed, 0x7031));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = gauss(rng);
  v.normalize();

  double lambda = 0.0;
  for (int it = 1; it <= max_iters; ++it) {
    Eigen::VectorXd w = Ms * v;
    const double norm = w.norm();
    if (norm == 0.0) {
      // v is in the kernel of the shifted matrix; any unit vector works.
      EigenPair out;
      out.value = -shift;
      out.vector = v;
      canonical_sign(out.vector);
      out.iterations = it;
      return out;
    }
    w /= norm;
    lambda = w.dot(Ms * w);
    const double resid = (Ms * w - lambda * w).norm();
    v = w;
    if (resid <= 1e-10 * std::max(1.0, std::abs(lambda))) {
      EigenPair out;
      out.value = lambda - shift;
      out.vector = v;
      canonical_sign(out.vector);
      out.iterations = it;
      return out;
    }
  }
  // A tight spectral gap starves the iteration; the dense solve settles it.
  return dense_top_eigenpair(M);
}

std::vector<EigenPair> top_k_eigenpairs(const Eigen::MatrixXd& M, int k, RngSeed seed,
                                        int max_iters) {
  std::vector<EigenPair> out;
  Eigen::MatrixXd cur = M;
  const int limit = std::min<int>(k, static_cast<int>(M.rows()));
  for (int j = 0; j < limit; ++j) {
    EigenPair ep = top_eigenpair(cur, split_seed(seed, 0xe1, j), max_iters);
    out.push_back(ep);
    cur -= ep.value * ep.vector * ep.vector.transpose();
  }
  return out;
}

double spectral_norm_sym(const Eigen::MatrixXd& M, RngSeed seed) {
  const double top = top_eigenpair(M, seed).value;
  const double bottom = top_eigenpair(Eigen::MatrixXd(-M), seed).value;
  return std::max(std::abs(top), std::abs(bottom));
}

}  // namespace robustkit
