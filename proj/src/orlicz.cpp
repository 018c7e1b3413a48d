#include "robustkit/orlicz.hpp"

#include <cassert>
#include <cmath>
#include <limits>

namespace robustkit {

namespace {
constexpr double kExpArgCap = 700.0;  // exp overflow guard; beyond this psi = +inf
}

OrliczFunction::OrliczFunction(OrliczKind kind, double k) : kind_(kind), k_(k) {
  validate();
}

OrliczFunction OrliczFunction::power(double k) {
  if (!(k >= 1.0) || !std::isfinite(k))
    throw PreconditionViolated("power gauge needs order k >= 1");
  return OrliczFunction(OrliczKind::Power, k);
}
OrliczFunction OrliczFunction::exponential() {
  return OrliczFunction(OrliczKind::Exponential, 0.0);
}
OrliczFunction OrliczFunction::subgaussian() {
  return OrliczFunction(OrliczKind::SubGaussian, 0.0);
}

double OrliczFunction::psi(double x) const {
  assert(x >= 0.0);
  switch (kind_) {
    case OrliczKind::Power:
      return std::pow(x, k_);
    case OrliczKind::Exponential:
      if (x > kExpArgCap) return std::numeric_limits<double>::infinity();
      return std::expm1(x);
    case OrliczKind::SubGaussian:
      if (x * x > kExpArgCap) return std::numeric_limits<double>::infinity();
      return std::expm1(x * x);
  }
  return 0.0;
}

double OrliczFunction::psi_inv(double y) const {
  assert(y >= 0.0);
  switch (kind_) {
    case OrliczKind::Power:
      return std::pow(y, 1.0 / k_);
    case OrliczKind::Exponential:
      return std::log1p(y);
    case OrliczKind::SubGaussian:
      return std::sqrt(std::log1p(y));
  }
  return 0.0;
}

std::string OrliczFunction::name() const {
  switch (kind_) {
    case OrliczKind::Power:
      return "power:" + std::to_string(k_);
    case OrliczKind::Exponential:
      return "exp";
    case OrliczKind::SubGaussian:
      return "subg";
  }
  return "?";
}

void OrliczFunction::validate() const {
  // psi(0) = 0, increasing, convex -- checked on a sample grid by first and
  // second differences.
  if (psi(0.0) != 0.0) throw PreconditionViolated("gauge must vanish at 0");
  const int grid = 64;
  const double hi = 8.0, h = hi / grid;
  double prev = 0.0, prev_diff = -1.0;
  for (int i = 1; i <= grid; ++i) {
    const double cur = psi(i * h);
    if (!std::isfinite(cur)) break;  // overflow region; fine for the gauge itself
    const double diff = cur - prev;
    if (diff < -1e-12) throw PreconditionViolated("gauge must be nondecreasing");
    if (i >= 2 && diff + 1e-12 < prev_diff)
      throw PreconditionViolated("gauge must be convex");
    prev = cur;
    prev_diff = diff;
  }
  // Inverse consistency at a few probes.
  for (double y : {0.25, 1.0, 4.0}) {
    const double x = psi_inv(y);
    if (std::abs(psi(x) - y) > 1e-8 * (1.0 + y))
      throw PreconditionViolated("gauge inverse mismatch");
  }
}

double orlicz_norm(const Eigen::VectorXd& values, const Eigen::VectorXd& weights,
                   const OrliczFunction& psi) {
  if (values.size() != weights.size()) throw DimensionMismatch("values/weights");
  if (!values.allFinite() || !weights.allFinite()) throw NonFinite("orlicz_norm input");
  const int n = static_cast<int>(values.size());
  double amax = 0.0;
  for (int i = 0; i < n; ++i) amax = std::max(amax, std::abs(values[i]));
  if (amax == 0.0) return 0.0;

  // g(t) = E psi(|f|/t) - 1, strictly decreasing in t on the region where it
  // is finite; the norm is its root.
  auto g = [&](double t) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      if (weights[i] == 0.0) continue;
      const double v = psi.psi(std::abs(values[i]) / t);
      if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
      s += weights[i] * v;
      if (s > 1e12) return s;  // far above 1; no need for more terms
    }
    return s - 1.0;
  };

  // Bracket: double upward until feasible, then halve the lower end until
  // infeasible (or negligible).
  double hi = amax;
  int guard = 0;
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (++guard > 200) throw NoConvergence("orlicz_norm bracket (upper)");
  }
  double lo = hi / 2.0;
  guard = 0;
  while (g(lo) <= 0.0) {
    hi = lo;
    lo /= 2.0;
    if (lo < amax * 1e-300 || ++guard > 2000) return 0.0;  // f is a.s. negligible
  }
  // Bisect to relative tolerance 1e-8.
  while (hi - lo > 1e-8 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double orlicz_norm(const EmpiricalDist& p, const OrliczFunction& psi) {
  return orlicz_norm(p.values_1d(), p.weights(), psi);
}

}  // namespace robustkit
