#include "robustkit/direction.hpp"

#include <cassert>
#include <cmath>

namespace robustkit {

Direction::Direction(Eigen::VectorXd v) : v_(std::move(v)) {
  if (v_.size() < 1) throw DimensionMismatch("empty direction");
  if (!v_.allFinite()) throw NonFinite("direction");
  if (std::abs(v_.norm() - 1.0) > 1e-10)
    throw PreconditionViolated("direction must have unit norm");
}

Direction Direction::normalized(Eigen::VectorXd v) {
  const double n = v.norm();
  if (n == 0.0 || !std::isfinite(n)) throw PreconditionViolated("cannot normalize zero direction");
  v /= n;
  // Renormalize once more to push rounding below the constructor tolerance.
  v /= v.norm();
  return Direction(std::move(v));
}

Eigen::VectorXd random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(d);
  double norm = 0.0;
  do {
    for (int i = 0; i < d; ++i) v[i] = gauss(rng);
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

std::vector<Eigen::VectorXd> sphere_sample_with_axes(int d, int count, RngSeed seed) {
  auto rng = make_rng(split_seed(seed, 0xd1c5));
  std::vector<Eigen::VectorXd> dirs;
  dirs.reserve(count + d);
  for (int i = 0; i < count; ++i) dirs.push_back(random_unit(d, rng));
  for (int i = 0; i < d; ++i) dirs.push_back(Eigen::VectorXd::Unit(d, i));
  return dirs;
}

int ProjectionFamily::size() const {
  return kind == Kind::Linear ? static_cast<int>(dirs.size())
                              : static_cast<int>(pairs.size());
}

Eigen::VectorXd ProjectionFamily::evaluate(const EmpiricalDist& p, int idx) const {
  if (idx < 0 || idx >= size()) throw DimensionMismatch("projection index out of range");
  if (kind == Kind::Linear) return p.project(dirs[idx]);
  const auto& [v1, v2] = pairs[idx];
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p.n());
  if (v1.size() > 0 && v1.squaredNorm() > 0) out += p.project(v1).array().square().matrix();
  if (v2.size() > 0 && v2.squaredNorm() > 0) out -= p.project(v2).array().square().matrix();
  return out;
}

ProjectionFamily ProjectionFamily::linear(int d, int count, RngSeed seed) {
  ProjectionFamily fam;
  fam.kind = Kind::Linear;
  fam.dirs = sphere_sample_with_axes(d, count, seed);
  if (fam.dirs.empty()) throw PreconditionViolated("projection family needs a direction");
  return fam;
}

ProjectionFamily ProjectionFamily::linear_fixed(std::vector<Eigen::VectorXd> dirs) {
  if (dirs.empty()) throw PreconditionViolated("projection family needs a direction");
  ProjectionFamily fam;
  fam.kind = Kind::Linear;
  fam.dirs = std::move(dirs);
  return fam;
}

ProjectionFamily ProjectionFamily::quad_diff(int d, int count, RngSeed seed) {
  ProjectionFamily fam;
  fam.kind = Kind::QuadDiff;
  auto base = sphere_sample_with_axes(d, count, seed);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(d);
  // One-legged pairs keep plain squares (v'x)^2 and their negatives in the
  // family.
  for (const auto& v : base) {
    fam.pairs.emplace_back(v, zero);
    fam.pairs.emplace_back(zero, v);
  }
  auto rng = make_rng(split_seed(seed, 0x9d));
  for (int i = 0; i < count; ++i)
    fam.pairs.emplace_back(random_unit(d, rng), random_unit(d, rng));
  return fam;
}

}  // namespace robustkit
