#include "robustkit/adversaries.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <sstream>

#include "robustkit/direction.hpp"

namespace robustkit {

namespace {

std::vector<double> parse_params(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

void validate_eps(double eps) {
  if (!(eps >= 0.0) || !(eps < 1.0) || !std::isfinite(eps))
    throw BadEps("corruption level must lie in [0, 1)");
}

// Sample k distinct indices from [0, n) (partial Fisher-Yates).
std::vector<int> sample_indices(int n, int k, std::mt19937_64& rng) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace

// ---- oblivious TV -------------------------------------------------------------

CorruptionResult corrupt_tv_oblivious(const PointSampler& clean,
                                      const PointSampler& contaminant, int d,
                                      double eps, int n, RngSeed seed) {
  validate_eps(eps);
  if (n < 1 || d < 1) throw DimensionMismatch("need n >= 1, d >= 1");
  auto rng = make_rng(split_seed(seed, 0x0b11));
  std::bernoulli_distribution contaminated(eps);
  Eigen::MatrixXd pts(n, d);
  int affected = 0;
  for (int i = 0; i < n; ++i) {
    const bool bad = eps > 0.0 && contaminated(rng);
    const Eigen::VectorXd x = bad ? contaminant(rng) : clean(rng);
    if (x.size() != d) throw DimensionMismatch("sampler returned wrong dimension");
    pts.row(i) = x.transpose();
    affected += bad ? 1 : 0;
  }
  CorruptionResult out{EmpiricalDist::uniform(std::move(pts)), {}};
  out.receipt.metric = "tv";
  out.receipt.model = "oblivious";
  out.receipt.eps = eps;
  // No paired clean sample exists under oblivious mixing; the certified
  // corruption level is the mixture weight itself.
  out.receipt.achieved = eps;
  out.receipt.affected = affected;
  out.receipt.affected_mass = static_cast<double>(affected) / n;
  out.receipt.seed = seed;
  return out;
}

// ---- adaptive TV ----------------------------------------------------------------

AdaptiveTvStrategy AdaptiveTvStrategy::shift_cluster(Eigen::VectorXd v, double m) {
  AdaptiveTvStrategy s;
  s.kind = Kind::ShiftCluster;
  s.direction = std::move(v);
  s.magnitude = m;
  return s;
}
AdaptiveTvStrategy AdaptiveTvStrategy::mean_pull(Eigen::VectorXd target) {
  AdaptiveTvStrategy s;
  s.kind = Kind::MeanPull;
  s.target = std::move(target);
  return s;
}
AdaptiveTvStrategy AdaptiveTvStrategy::tail_mimic() {
  AdaptiveTvStrategy s;
  s.kind = Kind::TailMimic;
  return s;
}

AdaptiveTvStrategy AdaptiveTvStrategy::parse(const std::string& text, int d) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (name == "shift_cluster") {
    const auto ps = parse_params(rest);
    if (static_cast<int>(ps.size()) != d + 1)
      throw DimensionMismatch("shift_cluster wants d direction entries + magnitude");
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = ps[i];
    if (v.norm() == 0) throw PreconditionViolated("zero shift direction");
    return shift_cluster(v / v.norm(), ps[d]);
  }
  if (name == "mean_pull") {
    const auto ps = parse_params(rest);
    if (static_cast<int>(ps.size()) != d)
      throw DimensionMismatch("mean_pull wants d target entries");
    Eigen::VectorXd t(d);
    for (int i = 0; i < d; ++i) t[i] = ps[i];
    return mean_pull(t);
  }
  if (name == "tail_mimic") return tail_mimic();
  throw UnknownStrategy("unknown adaptive TV strategy: " + name);
}

std::string AdaptiveTvStrategy::name() const {
  switch (kind) {
    case Kind::ShiftCluster:
      return "shift_cluster";
    case Kind::MeanPull:
      return "mean_pull";
    case Kind::TailMimic:
      return "tail_mimic";
  }
  return "?";
}

CorruptionResult corrupt_tv_adaptive(const EmpiricalDist& clean, double eps,
                                     const AdaptiveTvStrategy& strategy,
                                     RngSeed seed) {
  validate_eps(eps);
  const int n = clean.n();
  const int d = clean.dim();
  const int k = std::min<int>(n, static_cast<int>(std::ceil(eps * n - 1e-12)));
  auto rng = make_rng(split_seed(seed, 0xada));

  Eigen::MatrixXd pts = clean.points();
  std::vector<int> replaced;
  Eigen::VectorXd placement;

  switch (strategy.kind) {
    case AdaptiveTvStrategy::Kind::ShiftCluster: {
      if (strategy.direction.size() != d) throw DimensionMismatch("strategy direction");
      replaced = sample_indices(n, k, rng);
      placement = strategy.magnitude * strategy.direction;
      break;
    }
    case AdaptiveTvStrategy::Kind::MeanPull: {
      if (strategy.target.size() != d) throw DimensionMismatch("strategy target");
      const Eigen::VectorXd mu = weighted_mean(clean);
      const Eigen::VectorXd axis = mu - strategy.target;
      // Replace the k points that most oppose the pull direction, so moving
      // them to the target shifts the plain mean maximally toward it.
      std::vector<int> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      Eigen::VectorXd score = (pts.rowwise() - strategy.target.transpose()) * axis;
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (score[a] != score[b]) return score[a] > score[b];
        return a < b;
      });
      replaced.assign(idx.begin(), idx.begin() + k);
      placement = strategy.target;
      break;
    }
    case AdaptiveTvStrategy::Kind::TailMimic: {
      const Eigen::VectorXd mu = weighted_mean(clean);
      // Weighted (1 - eps)-quantile of the centered radius.
      std::vector<int> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      Eigen::VectorXd radius(n);
      for (int i = 0; i < n; ++i) radius[i] = (pts.row(i).transpose() - mu).norm();
      std::sort(idx.begin(), idx.end(),
                [&](int a, int b) { return radius[a] < radius[b]; });
      double acc = 0.0;
      double shell = radius[idx.back()];
      for (int r : idx) {
        acc += clean.weights()[r];
        if (acc >= 1.0 - eps - 1e-15) {
          shell = radius[r];
          break;
        }
      }
      replaced = sample_indices(n, k, rng);
      placement = mu + shell * random_unit(d, rng);
      break;
    }
  }

  double replaced_mass = 0.0;
  for (int i : replaced) {
    pts.row(i) = placement.transpose();
    replaced_mass += clean.weights()[i];
  }

  CorruptionResult out{EmpiricalDist(std::move(pts), clean.weights()), {}};
  out.receipt.metric = "tv";
  out.receipt.model = "adaptive";
  out.receipt.strategy = strategy.name();
  out.receipt.eps = eps;
  out.receipt.achieved = replaced_mass;
  out.receipt.affected = k;
  out.receipt.affected_mass = replaced_mass;
  out.receipt.seed = seed;
  return out;
}

// ---- W1 ---------------------------------------------------------------------------

W1Strategy W1Strategy::uniform_shift(Eigen::VectorXd v) {
  W1Strategy s;
  s.kind = Kind::UniformShift;
  s.direction = std::move(v);
  return s;
}
W1Strategy W1Strategy::radial_inflate() {
  W1Strategy s;
  s.kind = Kind::RadialInflate;
  return s;
}
W1Strategy W1Strategy::top_k(Eigen::VectorXd v, int k) {
  W1Strategy s;
  s.kind = Kind::TopK;
  s.direction = std::move(v);
  s.k = k;
  return s;
}

W1Strategy W1Strategy::parse(const std::string& text, int d) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (name == "uniform_shift") {
    const auto ps = parse_params(rest);
    if (static_cast<int>(ps.size()) != d)
      throw DimensionMismatch("uniform_shift wants d direction entries");
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = ps[i];
    if (v.norm() == 0) throw PreconditionViolated("zero shift direction");
    return uniform_shift(v / v.norm());
  }
  if (name == "radial_inflate") return radial_inflate();
  if (name == "top_k") {
    const auto ps = parse_params(rest);
    if (static_cast<int>(ps.size()) != d + 1)
      throw DimensionMismatch("top_k wants d direction entries + k");
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = ps[i];
    if (v.norm() == 0) throw PreconditionViolated("zero direction");
    return top_k(v / v.norm(), static_cast<int>(ps[d]));
  }
  throw UnknownStrategy("unknown W1 strategy: " + name);
}

std::string W1Strategy::name() const {
  switch (kind) {
    case Kind::UniformShift:
      return "uniform_shift";
    case Kind::RadialInflate:
      return "radial_inflate";
    case Kind::TopK:
      return "top_k";
  }
  return "?";
}

CorruptionResult corrupt_w1(const EmpiricalDist& clean, double eps,
                            const W1Strategy& strategy, RngSeed seed) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw BadEps("transport budget must be >= 0");
  const int n = clean.n();
  const int d = clean.dim();
  Eigen::MatrixXd pts = clean.points();
  int affected = 0;
  double affected_mass = 0.0;

  switch (strategy.kind) {
    case W1Strategy::Kind::UniformShift: {
      if (strategy.direction.size() != d) throw DimensionMismatch("strategy direction");
      if (eps > 0) {
        pts.rowwise() += (eps * strategy.direction).transpose();
        affected = n;
        affected_mass = 1.0;
      }
      break;
    }
    case W1Strategy::Kind::RadialInflate: {
      const Eigen::VectorXd mu = weighted_mean(clean);
      double spread = 0.0;
      for (int i = 0; i < n; ++i)
        spread += clean.weights()[i] * (pts.row(i).transpose() - mu).norm();
      if (spread <= 0.0)
        throw PreconditionViolated("radial_inflate needs a spread-out sample");
      const double s = eps / spread;
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd offset = pts.row(i).transpose() - mu;
        if (offset.norm() > 0) {
          pts.row(i) += (s * offset).transpose();
          ++affected;
          affected_mass += clean.weights()[i];
        }
      }
      break;
    }
    case W1Strategy::Kind::TopK: {
      if (strategy.direction.size() != d) throw DimensionMismatch("strategy direction");
      const int k = std::min<int>(std::max(strategy.k, 1), n);
      std::vector<int> idx(n);
      std::iota(idx.begin(), idx.end(), 0);
      const Eigen::VectorXd proj = pts * strategy.direction;
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (std::abs(proj[a]) != std::abs(proj[b]))
          return std::abs(proj[a]) > std::abs(proj[b]);
        return a < b;
      });
      double sel_mass = 0.0;
      for (int i = 0; i < k; ++i) sel_mass += clean.weights()[idx[i]];
      const double move = eps / sel_mass;  // same distance per selected point
      for (int i = 0; i < k; ++i) {
        const int r = idx[i];
        const double sgn = proj[r] >= 0 ? 1.0 : -1.0;
        pts.row(r) += (sgn * move * strategy.direction).transpose();
        ++affected;
        affected_mass += clean.weights()[r];
      }
      break;
    }
  }

  // Exact transport accounting against the input.
  double spent = 0.0;
  for (int i = 0; i < n; ++i)
    spent += clean.weights()[i] * (pts.row(i) - clean.points().row(i)).norm();

  CorruptionResult out{EmpiricalDist(std::move(pts), clean.weights()), {}};
  out.receipt.metric = "w1";
  out.receipt.model = "w1";
  out.receipt.strategy = strategy.name();
  out.receipt.eps = eps;
  out.receipt.achieved = spent;
  out.receipt.affected = affected;
  out.receipt.affected_mass = affected_mass;
  out.receipt.seed = seed;
  return out;
}

// ---- informative-direction deletion ------------------------------------------------

double dimension_delete_atom(double sigma, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw BadEps("eps must lie in (0, 1)");
  if (!(sigma > 0.0)) throw PreconditionViolated("sigma must be positive");
  return sigma * std::sqrt(std::log1p(1.0 / eps));
}

CorruptionResult adversary_dimension_delete(const EmpiricalDist& joint_xy,
                                            double eps) {
  validate_eps(eps);
  const int d = joint_xy.dim();
  if (d < 2) throw DimensionMismatch("expects joint (x, y) data with d >= 2 columns");
  const int n = joint_xy.n();
  Eigen::MatrixXd pts = joint_xy.points();
  double moved_mass = 0.0;
  int affected = 0;
  for (int i = 0; i < n; ++i) {
    // The informative atoms are exactly the rows with a nonzero covariate.
    if (pts.row(i).head(d - 1).cwiseAbs().maxCoeff() > 0.0) {
      pts.row(i).setZero();
      moved_mass += joint_xy.weights()[i];
      ++affected;
    }
  }
  // The construction advertises informative mass eps; allow sampling slack.
  const double slack = std::max(1.0 / n, 4.0 * std::sqrt(eps * (1.0 - eps) / n)) + 1e-9;
  if (moved_mass > eps + slack)
    throw BadEps("informative mass exceeds the advertised level");

  CorruptionResult out{EmpiricalDist(std::move(pts), joint_xy.weights()), {}};
  out.receipt.metric = "tv";
  out.receipt.model = "dimension_delete";
  out.receipt.eps = eps;
  out.receipt.achieved = moved_mass;
  out.receipt.affected = affected;
  out.receipt.affected_mass = moved_mass;
  out.receipt.seed = 0;
  return out;
}

}  // namespace robustkit
