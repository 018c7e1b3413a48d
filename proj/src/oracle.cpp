#include "robustkit/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "robustkit/direction.hpp"
#include "robustkit/distances.hpp"
#include "robustkit/resilience.hpp"
#include "sorted1d.hpp"

namespace robustkit {

namespace {

// Exact 1-d worst deletion by enumerating the vertices of the polytope
// {0 <= delta_i <= w_i, sum delta_i = eta}: each vertex deletes a subset S
// fully plus at most one fractional atom. The renormalized kept mean is
// linear in delta, so a vertex attains the optimum.
struct Vertex1dResult {
  double gap = 0.0;
  std::vector<double> deleted;
};

Vertex1dResult vertex_worst_deletion_1d(const std::vector<double>& xs,
                                        const std::vector<double>& ws, double eta) {
  const int n = static_cast<int>(xs.size());
  assert(n >= 1 && n <= 15);
  double sx = 0.0;
  for (int i = 0; i < n; ++i) sx += ws[i] * xs[i];
  const double plain = sx;  // weights sum to 1

  Vertex1dResult best;
  best.deleted.assign(n, 0.0);
  if (eta <= 0.0) return best;

  const double keep = 1.0 - eta;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double wS = 0.0, wxS = 0.0;
    for (int i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        wS += ws[i];
        wxS += ws[i] * xs[i];
      }
    }
    if (wS > eta + 1e-15) continue;
    const double resid = eta - wS;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) continue;
      if (ws[j] + 1e-15 < resid) continue;
      const double kept_mean = (sx - wxS - resid * xs[j]) / keep;
      const double gap = std::abs(kept_mean - plain);
      if (gap > best.gap) {
        best.gap = gap;
        best.deleted.assign(n, 0.0);
        for (int i = 0; i < n; ++i)
          if (mask & (1u << i)) best.deleted[i] = ws[i];
        best.deleted[j] += resid;
      }
    }
    // Vertex with no fractional atom (the subset exactly exhausts eta).
    if (std::abs(resid) <= 1e-15) {
      const double kept_mean = (sx - wxS) / keep;
      const double gap = std::abs(kept_mean - plain);
      if (gap > best.gap) {
        best.gap = gap;
        best.deleted.assign(n, 0.0);
        for (int i = 0; i < n; ++i)
          if (mask & (1u << i)) best.deleted[i] = ws[i];
      }
    }
  }
  return best;
}

// Exact per-direction deletion gap: for a linear objective the optimal
// vertex deletes a contiguous tail of the sorted projection, so both
// one-sided tail trims suffice.
double directional_gap(std::vector<std::pair<double, double>>& xw, double eta) {
  std::sort(xw.begin(), xw.end());
  const int n = static_cast<int>(xw.size());
  double plain = 0.0;
  for (auto& [x, w] : xw) plain += w * x;
  const double keep = 1.0 - eta;

  auto trim = [&](bool upper) {
    double left = eta, del = 0.0;
    if (upper) {
      for (int i = n - 1; i >= 0 && left > 1e-18; --i) {
        const double take = std::min(xw[i].second, left);
        del += take * xw[i].first;
        left -= take;
      }
    } else {
      for (int i = 0; i < n && left > 1e-18; ++i) {
        const double take = std::min(xw[i].second, left);
        del += take * xw[i].first;
        left -= take;
      }
    }
    return (plain - del) / keep;
  };
  return std::max(std::abs(trim(true) - plain), std::abs(trim(false) - plain));
}

}  // namespace

ExhaustiveDeletionResult exhaustive_worst_deletion(const EmpiricalDist& p, double eta) {
  if (!(eta >= 0.0) || eta >= 1.0 - 1e-12)
    throw BadEta("deletion fraction must lie in [0, 1)");
  if (p.n() > 15 || p.dim() > 3)
    throw TooLarge("exhaustive deletion oracle is limited to n <= 15, d <= 3");

  ExhaustiveDeletionResult out;
  if (p.dim() == 1) {
    std::vector<double> xs(p.n()), ws(p.n());
    for (int i = 0; i < p.n(); ++i) {
      xs[i] = p.points()(i, 0);
      ws[i] = p.weights()[i];
    }
    const auto r = vertex_worst_deletion_1d(xs, ws, eta);
    out.gap = r.gap;
    out.deleted_mass = Eigen::Map<const Eigen::VectorXd>(r.deleted.data(), p.n());
    out.witness_dir = Eigen::VectorXd::Constant(1, 1.0);
    return out;
  }

  const auto dirs = sphere_sample_with_axes(p.dim(), 4096, 0x5ca9);
  double best = -1.0;
  Eigen::VectorXd best_dir;
  for (const auto& v : dirs) {
    std::vector<std::pair<double, double>> xw(p.n());
    for (int i = 0; i < p.n(); ++i) xw[i] = {p.points().row(i).dot(v), p.weights()[i]};
    const double g = directional_gap(xw, eta);
    if (g > best) {
      best = g;
      best_dir = v;
    }
  }
  // Recover the deletion pattern along the winning direction exactly.
  std::vector<double> xs(p.n()), ws(p.n());
  for (int i = 0; i < p.n(); ++i) {
    xs[i] = p.points().row(i).dot(best_dir);
    ws[i] = p.weights()[i];
  }
  const auto r = vertex_worst_deletion_1d(xs, ws, eta);
  out.gap = r.gap;
  out.deleted_mass = Eigen::Map<const Eigen::VectorXd>(r.deleted.data(), p.n());
  out.witness_dir = best_dir;
  return out;
}

ConvexOrderResult convex_order_check(const EmpiricalDist& rp, const EmpiricalDist& rq,
                                     int n_test, RngSeed seed) {
  if (rp.dim() != 1 || rq.dim() != 1)
    throw DimensionMismatch("convex order check expects 1-d inputs");
  const auto sp = detail::make_sorted(rp.values_1d(), rp.weights(), 0.0);
  const auto sq = detail::make_sorted(rq.values_1d(), rq.weights(), 0.0);

  ConvexOrderResult out;
  out.mean_gap = std::abs(sp.mean() - sq.mean());

  const auto grid = detail::merged_grid(sp, sq, 0.0);
  out.worst_violation = -std::numeric_limits<double>::infinity();
  for (const double z : grid) {
    const double excess =
        detail::lower_tail_integral(sp, z) - detail::lower_tail_integral(sq, z);
    if (excess > out.worst_violation) {
      out.worst_violation = excess;
      out.witness_z = z;
    }
  }
  out.ok = out.mean_gap <= 1e-9 && out.worst_violation <= 1e-9;
  if (!out.ok) return out;

  // Spot-check with random piecewise-linear convex functions; these are
  // positive combinations of the hinge tests above plus an affine part, so
  // they must pass once the grid check does.
  const double lo = std::min(grid.front(), grid.back());
  const double hi = std::max(grid.front(), grid.back());
  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> ub(lo - 0.1 * (hi - lo + 1.0),
                                            hi + 0.1 * (hi - lo + 1.0));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < n_test; ++t) {
    const int hinges = 1 + static_cast<int>(splitmix64(split_seed(seed, t)) % 5);
    std::vector<double> a(hinges), b(hinges);
    for (int k = 0; k < hinges; ++k) {
      a[k] = std::abs(gauss(rng));
      b[k] = ub(rng);
    }
    const double slope = gauss(rng);
    auto f = [&](double x) {
      double v = slope * x;
      for (int k = 0; k < hinges; ++k) v += a[k] * std::max(x - b[k], 0.0);
      return v;
    };
    double ep = 0.0, eq = 0.0;
    for (size_t i = 0; i < sp.x.size(); ++i) ep += sp.w[i] * f(sp.x[i]);
    for (size_t i = 0; i < sq.x.size(); ++i) eq += sq.w[i] * f(sq.x[i]);
    const double tol = 1e-7 * std::max({1.0, std::abs(ep), std::abs(eq)});
    if (ep > eq + tol) {
      out.ok = false;
      out.worst_violation = ep - eq;
      out.witness_z = b[0];
      return out;
    }
  }
  return out;
}

std::vector<ModulusPair> modulus_property_generator(const ModulusConstraint& c,
                                                    double eps, int count,
                                                    RngSeed seed) {
  if (!(eps > 0.0) || eps >= 0.5) throw BadEps("eps must lie in (0, 0.5)");
  if (count < 1) throw PreconditionViolated("count must be positive");

  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<int> natoms(2, 8);

  std::vector<ModulusPair> out;
  long attempts = 0;
  const long cap = 1000L * count + 1000L;

  while (static_cast<int>(out.size()) < count) {
    if (++attempts > cap) throw GenerationStarved("modulus pair acceptance rate fell below 0.1%");

    const int m = natoms(rng);
    std::vector<double> xs(m), w1(m);
    double wsum = 0.0;
    const double spread = 0.5 + 1.5 * unif(rng);
    for (int i = 0; i < m; ++i) {
      xs[i] = spread * gauss(rng);
      w1[i] = std::exp(gauss(rng));
      wsum += w1[i];
    }
    for (double& w : w1) w /= wsum;

    // Proposal: reweight on the shared support (optionally with an extra
    // atom on one side) moving at most 2 eps of mass.
    std::vector<double> x2 = xs, w2 = w1;
    const double delta = (0.2 + 0.8 * unif(rng)) * 2.0 * eps;
    if (unif(rng) < 0.5) {
      const int from = static_cast<int>(splitmix64(split_seed(seed, attempts, 1)) % m);
      const int to = static_cast<int>(splitmix64(split_seed(seed, attempts, 2)) % m);
      if (from == to) continue;
      const double moved = std::min(delta, w2[from] * 0.9);
      w2[from] -= moved;
      w2[to] += moved;
    } else {
      for (double& w : w2) w *= 1.0 - delta;
      x2.push_back(spread * gauss(rng));
      w2.push_back(delta);
    }

    // Joint shrink toward the global mean preserves the weight pattern (so
    // TV is unchanged) while scaling every deletion gap and Orlicz norm.
    auto build = [](const std::vector<double>& x, const std::vector<double>& w) {
      return EmpiricalDist::weighted_1d(x, w);
    };
    double g = 0.0;
    for (int i = 0; i < m; ++i) g += w1[i] * xs[i];
    bool certified = false;
    for (int shrink = 0; shrink < 60 && !certified; ++shrink) {
      const EmpiricalDist p1 = build(xs, w1);
      const EmpiricalDist p2 = build(x2, w2);
      if (c.kind == ModulusConstraint::Kind::Resilience) {
        certified = exhaustive_worst_deletion(p1, 2.0 * eps).gap <= c.rho &&
                    exhaustive_worst_deletion(p2, 2.0 * eps).gap <= c.rho;
      } else {
        const double mu1 = weighted_mean(p1)[0], mu2 = weighted_mean(p2)[0];
        std::vector<double> c1(p1.n()), c2(p2.n());
        for (int i = 0; i < p1.n(); ++i) c1[i] = p1.points()(i, 0) - mu1;
        for (int i = 0; i < p2.n(); ++i) c2[i] = p2.points()(i, 0) - mu2;
        const Eigen::VectorXd v1 = Eigen::Map<const Eigen::VectorXd>(c1.data(), p1.n());
        const Eigen::VectorXd v2 = Eigen::Map<const Eigen::VectorXd>(c2.data(), p2.n());
        certified = orlicz_norm(v1, p1.weights(), c.psi) <= c.sigma &&
                    orlicz_norm(v2, p2.weights(), c.psi) <= c.sigma;
      }
      if (!certified) {
        for (double& x : xs) x = g + 0.7 * (x - g);
        for (double& x : x2) x = g + 0.7 * (x - g);
      }
    }
    if (!certified) continue;

    ModulusPair pair{build(xs, w1), build(x2, w2), 0.0, 0.0};
    pair.tv = tv_discrete(pair.p1, pair.p2).value;
    if (pair.tv > 2.0 * eps + 1e-12) continue;
    if (pair.tv >= 1.0 - 1e-9) continue;

    if (c.kind == ModulusConstraint::Kind::Resilience) {
      pair.bound = exhaustive_worst_deletion(pair.p1, pair.tv).gap +
                   exhaustive_worst_deletion(pair.p2, pair.tv).gap;
    } else {
      const double mu1 = weighted_mean(pair.p1)[0], mu2 = weighted_mean(pair.p2)[0];
      Eigen::VectorXd v1 = pair.p1.points().col(0).array() - mu1;
      Eigen::VectorXd v2 = pair.p2.points().col(0).array() - mu2;
      const double n1 = orlicz_norm(v1, pair.p1.weights(), c.psi);
      const double n2 = orlicz_norm(v2, pair.p2.weights(), c.psi);
      pair.bound = orlicz_resilience_bound(n1, c.psi, pair.tv) +
                   orlicz_resilience_bound(n2, c.psi, pair.tv);
    }
    out.push_back(std::move(pair));
  }
  return out;
}

FriendlyCheckResult friendly_perturbation_check(const EmpiricalDist& p,
                                                const EmpiricalDist& r,
                                                const std::vector<CouplingPair>& pairs,
                                                ScalarIndex f, double eta) {
  if (p.dim() != 1 || r.dim() != 1)
    throw DimensionMismatch("friendly perturbation check expects 1-d inputs");
  FriendlyCheckResult out;

  auto index = [&](double v) { return f == ScalarIndex::Identity ? v : std::abs(v); };

  // Marginal check: aggregate coupling mass by endpoint and compare against
  // the stated distributions atom by atom.
  auto aggregate = [](std::vector<std::pair<double, double>> rows) {
    std::sort(rows.begin(), rows.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& [x, m] : rows) {
      if (m <= 0.0) continue;
      if (!merged.empty() && std::abs(merged.back().first - x) <= 1e-9)
        merged.back().second += m;
      else
        merged.emplace_back(x, m);
    }
    return merged;
  };
  auto dist_atoms = [&aggregate](const EmpiricalDist& d) {
    std::vector<std::pair<double, double>> rows(d.n());
    for (int i = 0; i < d.n(); ++i) rows[i] = {d.points()(i, 0), d.weights()[i]};
    return aggregate(std::move(rows));
  };
  auto matches = [](const std::vector<std::pair<double, double>>& a,
                    const std::vector<std::pair<double, double>>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
      if (std::abs(a[i].first - b[i].first) > 1e-9) return false;
      if (std::abs(a[i].second - b[i].second) > 1e-9) return false;
    }
    return true;
  };

  std::vector<std::pair<double, double>> px, ry;
  for (const auto& pr : pairs) {
    if (pr.x.size() != 1 || pr.y.size() != 1)
      throw DimensionMismatch("coupling rows must be 1-d");
    if (pr.mass < -1e-15) {
      out.reason = "negative coupling mass";
      return out;
    }
    px.emplace_back(pr.x[0], pr.mass);
    ry.emplace_back(pr.y[0], pr.mass);
  }
  if (!matches(aggregate(std::move(px)), dist_atoms(p))) {
    out.reason = "coupling does not reproduce the source marginal";
    return out;
  }
  if (!matches(aggregate(std::move(ry)), dist_atoms(r))) {
    out.reason = "coupling does not reproduce the target marginal";
    return out;
  }

  for (const auto& pr : pairs) out.cost += pr.mass * std::abs(pr.x[0] - pr.y[0]);
  if (out.cost > eta + 1e-9) {
    out.reason = "coupling cost exceeds the budget";
    return out;
  }

  double target = 0.0;
  for (int i = 0; i < r.n(); ++i) target += r.weights()[i] * index(r.points()(i, 0));

  for (size_t k = 0; k < pairs.size(); ++k) {
    if (pairs[k].mass <= 1e-15) continue;
    const double fx = index(pairs[k].x[0]);
    const double fy = index(pairs[k].y[0]);
    const double lo = std::min(fx, target), hi = std::max(fx, target);
    const double tol = 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
    if (fy < lo - tol || fy > hi + tol) {
      out.violating_pair = static_cast<int>(k);
      out.reason = "moved point left the bracket between its source and the target index";
      return out;
    }
  }
  out.ok = true;
  return out;
}

}  // namespace robustkit
