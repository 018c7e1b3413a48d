#include "robustkit/estimators.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "robustkit/direction.hpp"
#include "robustkit/linalg.hpp"
#include "sorted1d.hpp"

namespace robustkit {

namespace {

void validate_cfg(const EstimatorConfig& cfg) {
  if (!(cfg.eps >= 0.0) || cfg.eps > kMassCap)
    throw BadEps("assumed corruption level must lie in [0, 0.45]");
  if (!(cfg.sigma > 0.0) || !std::isfinite(cfg.sigma))
    throw PreconditionViolated("scale sigma must be positive");
}

// Finite-sample allowance added to the assumed corruption level when sizing
// filter thresholds.
double eps_tilde(const EstimatorConfig& cfg, int n, int d) {
  return cfg.eps + d * std::log(static_cast<double>(d) + 1.0) / n;
}

// Integer power by repeated squaring; the directional-moment loops call this
// once per point per evaluation, where std::pow's general path dominates the
// whole projection.
double ipow(double a, int k) {
  double r = 1.0;
  while (k > 0) {
    if (k & 1) r *= a;
    a *= a;
    k >>= 1;
  }
  return r;
}

// Weighted min-norm least squares on the joint (x, y) sample with external
// per-point multipliers c (soft deletions).
Eigen::VectorXd solve_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                          const Eigen::VectorXd& w) {
  const double total = w.sum();
  if (!(total > 0.0)) throw Singular("no mass left in the design");
  Eigen::MatrixXd A = X.transpose() * w.asDiagonal() * X / total;
  Eigen::VectorXd b = X.transpose() * w.asDiagonal() * y / total;
  // Min-norm solve: rank-deficient designs (e.g. a deleted informative
  // direction) yield the zero component instead of an error.
  return A.completeOrthogonalDecomposition().solve(b);
}

}  // namespace

// ---- 1-d robust mean -----------------------------------------------------------

EstimatorReport robust_mean_1d(const EmpiricalDist& p1d, const EstimatorConfig& cfg) {
  if (p1d.dim() != 1) throw DimensionMismatch("robust_mean_1d expects 1-d input");
  validate_cfg(cfg);
  const auto s = detail::make_sorted(p1d.values_1d(), p1d.weights(), 0.0);
  const int m = static_cast<int>(s.x.size());
  const double sig2 = 4.0 * cfg.sigma * cfg.sigma;

  // Trim mass/2 from each tail, renormalize, and report (mean, gauge value).
  auto trimmed_stats = [&](double mass) {
    std::vector<double> w = s.w;
    double left = mass / 2.0;
    for (int i = m - 1; i >= 0 && left > 1e-18; --i) {
      const double take = std::min(w[i], left);
      w[i] -= take;
      left -= take;
    }
    left = mass / 2.0;
    for (int i = 0; i < m && left > 1e-18; ++i) {
      const double take = std::min(w[i], left);
      w[i] -= take;
      left -= take;
    }
    const double kept = 1.0 - mass;
    double mu = 0.0;
    for (int i = 0; i < m; ++i) mu += w[i] * s.x[i];
    mu /= kept;
    double gauge = 0.0;
    for (int i = 0; i < m; ++i) {
      if (w[i] <= 0.0) continue;
      const double dev = s.x[i] - mu;
      const double v = cfg.psi.psi(dev * dev / sig2);
      if (!std::isfinite(v)) {
        gauge = std::numeric_limits<double>::infinity();
        break;
      }
      gauge += w[i] * v;
    }
    if (std::isfinite(gauge)) gauge /= kept;
    return std::pair<double, double>(mu, gauge);
  };
  auto feasible = [&](double mass) { return trimmed_stats(mass).second <= 4.0 + 1e-9; };

  double mass = 0.0;
  int iters = 0;
  if (!feasible(0.0)) {
    if (!feasible(kMassCap))
      throw BudgetExceeded("trimmed-moment projection needs more than the mass cap");
    double lo = 0.0, hi = kMassCap;
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      if (feasible(mid))
        hi = mid;
      else
        lo = mid;
      ++iters;
    }
    mass = hi;
  }

  const auto [mu, gauge] = trimmed_stats(mass);
  (void)gauge;

  // Materialize the projected sample for the report.
  std::vector<double> w = s.w;
  {
    double left = mass / 2.0;
    for (int i = m - 1; i >= 0 && left > 1e-18; --i) {
      const double take = std::min(w[i], left);
      w[i] -= take;
      left -= take;
    }
    left = mass / 2.0;
    for (int i = 0; i < m && left > 1e-18; ++i) {
      const double take = std::min(w[i], left);
      w[i] -= take;
      left -= take;
    }
  }
  std::vector<double> xs, ws;
  for (int i = 0; i < m; ++i) {
    if (w[i] > 0) {
      xs.push_back(s.x[i]);
      ws.push_back(w[i] / (1.0 - mass));
    }
  }
  EstimatorReport rep{Eigen::VectorXd::Constant(1, mu),
                      Eigen::MatrixXd(),
                      EmpiricalDist::weighted_1d(xs, ws),
                      mass,
                      0.0,
                      iters,
                      0.0};
  return rep;
}

// ---- high-d robust mean -----------------------------------------------------------

EstimatorReport robust_mean_highd(const EmpiricalDist& p, const EstimatorConfig& cfg) {
  validate_cfg(cfg);
  const EmpiricalDist sorted = p.lex_sorted();
  const int d = sorted.dim();

  std::vector<Eigen::VectorXd> dirs =
      sphere_sample_with_axes(d, cfg.direction_budget, cfg.seed);
  if (d > 1) {
    for (const auto& ep :
         top_k_eigenpairs(weighted_covariance(sorted), 3, split_seed(cfg.seed, 0xe16)))
      dirs.push_back(ep.vector);
  }

  const int D = static_cast<int>(dirs.size());
  Eigen::VectorXd mu_v(D);
  double total_mass_removed = 0.0;
  for (int j = 0; j < D; ++j) {
    const auto r = robust_mean_1d(sorted.project_dist(dirs[j]), cfg);
    mu_v[j] = r.estimate[0];
    total_mass_removed = std::max(total_mass_removed, r.mass_removed);
  }

  // Aggregate: argmin_mu max_j |dirs_j' mu - mu_v[j]| by subgradient descent
  // (20 restarts, step c/sqrt(t)), then Polyak refinement on the polyhedral
  // objective.
  auto fval = [&](const Eigen::VectorXd& mu, int* arg = nullptr, double* sgn = nullptr) {
    double best = -1.0;
    for (int j = 0; j < D; ++j) {
      const double r = dirs[j].dot(mu) - mu_v[j];
      if (std::abs(r) > best) {
        best = std::abs(r);
        if (arg) *arg = j;
        if (sgn) *sgn = r >= 0 ? 1.0 : -1.0;
      }
    }
    return best;
  };

  // Axis-assembled start: coordinates read off the axis directions.
  Eigen::VectorXd axis_start = weighted_mean(sorted);
  for (int j = 0; j < D; ++j) {
    for (int c = 0; c < d; ++c) {
      if ((dirs[j] - Eigen::VectorXd::Unit(d, c)).norm() < 1e-12) axis_start[c] = mu_v[j];
    }
  }

  auto rng = make_rng(split_seed(cfg.seed, 0x566));
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::VectorXd global_best;
  double global_fbest = std::numeric_limits<double>::infinity();
  std::vector<double> restart_bests;
  for (int restart = 0; restart < 20; ++restart) {
    Eigen::VectorXd mu;
    if (restart == 0)
      mu = weighted_mean(sorted);
    else if (restart == 1)
      mu = axis_start;
    else {
      mu = axis_start;
      for (int c = 0; c < d; ++c) mu[c] += 0.05 * cfg.sigma * gauss(rng);
    }
    Eigen::VectorXd best_mu = mu;
    double fbest = fval(mu);
    const double c0 = std::max(fbest, 1e-6);
    // Phase 1: diminishing steps.
    for (int t = 1; t <= 500; ++t) {
      int arg = 0;
      double sgn = 1.0;
      const double f = fval(mu, &arg, &sgn);
      if (f < fbest) {
        fbest = f;
        best_mu = mu;
      }
      mu -= (c0 / std::sqrt(static_cast<double>(t))) * sgn * dirs[arg];
    }
    // Phase 2: Polyak steps toward an adaptive target.
    double delta = std::max(fbest / 10.0, 1e-12);
    int stall = 0;
    mu = best_mu;
    for (int t = 1; t <= 3000; ++t) {
      int arg = 0;
      double sgn = 1.0;
      const double f = fval(mu, &arg, &sgn);
      if (f < fbest - 1e-15) {
        fbest = f;
        best_mu = mu;
        stall = 0;
      } else if (++stall >= 100) {
        delta /= 2.0;
        stall = 0;
        mu = best_mu;
        if (delta < 1e-14) break;
      }
      const double target = std::max(0.0, fbest - delta);
      mu -= (f - target) * sgn * dirs[arg];
    }
    restart_bests.push_back(fbest);
    if (fbest < global_fbest) {
      global_fbest = fbest;
      global_best = best_mu;
    }
  }

  EstimatorReport rep{global_best,
                      Eigen::MatrixXd(),
                      sorted,
                      total_mass_removed,
                      0.0,
                      20,
                      global_fbest};
  return rep;
}

// ---- spectral filters ----------------------------------------------------------------

namespace {

EstimatorReport filter_loop(const EmpiricalDist& input, const EstimatorConfig& cfg,
                            double threshold) {
  const EmpiricalDist sorted = input.lex_sorted();
  const int n = sorted.n();
  const Eigen::MatrixXd& X = sorted.points();
  const Eigen::VectorXd& w = sorted.weights();

  Eigen::VectorXd c = Eigen::VectorXd::Ones(n);
  double prev_lambda = std::numeric_limits<double>::infinity();
  int iters = 0;
  Eigen::VectorXd mu;
  double kept = 1.0;

  for (;; ++iters) {
    Eigen::VectorXd cw = c.cwiseProduct(w);
    kept = cw.sum();
    if (1.0 - kept > kMassCap)
      throw BudgetExceeded("filter would delete more than the mass cap");
    const Eigen::VectorXd wn = cw / kept;
    mu = X.transpose() * wn;
    Eigen::MatrixXd centered = X.rowwise() - mu.transpose();
    Eigen::MatrixXd cov = centered.transpose() * wn.asDiagonal() * centered;
    const auto top = top_eigenpair(cov, split_seed(cfg.seed, 0xf117, iters));
    if (top.value <= threshold + 1e-9) break;
    // The filter only ever removes outlying mass in the heaviest direction,
    // so the top eigenvalue must not grow between rounds.
    assert(top.value <= prev_lambda * (1.0 + 1e-6) + 1e-9);
    prev_lambda = top.value;
    if (iters >= n + 10) throw NoConvergence("filter failed to settle");

    const Eigen::VectorXd proj = centered * top.vector;
    double tau_max = 0.0;
    for (int i = 0; i < n; ++i)
      if (cw[i] > 0.0) tau_max = std::max(tau_max, proj[i] * proj[i]);
    if (tau_max <= 0.0) throw NoConvergence("filter stalled on a degenerate direction");
    for (int i = 0; i < n; ++i) {
      if (cw[i] <= 0.0) continue;
      c[i] *= 1.0 - (proj[i] * proj[i]) / tau_max;
    }
  }

  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (c[i] * w[i] > 0.0) keep.push_back(i);
  Eigen::MatrixXd pts(static_cast<int>(keep.size()), sorted.dim());
  Eigen::VectorXd ws(static_cast<int>(keep.size()));
  for (size_t r = 0; r < keep.size(); ++r) {
    pts.row(static_cast<int>(r)) = X.row(keep[r]);
    ws[static_cast<int>(r)] = c[keep[r]] * w[keep[r]] / kept;
  }

  EstimatorReport rep{mu,
                      Eigen::MatrixXd(),
                      EmpiricalDist(std::move(pts), std::move(ws)),
                      1.0 - kept,
                      0.0,
                      iters,
                      0.0};
  return rep;
}

}  // namespace

EstimatorReport filter_mean(const EmpiricalDist& p, const EstimatorConfig& cfg) {
  validate_cfg(cfg);
  const double et = eps_tilde(cfg, p.n(), p.dim());
  const double threshold = cfg.sigma * cfg.sigma * (1.0 + 2.0 * et);
  return filter_loop(p, cfg, threshold);
}

EstimatorReport filter_mean_isotropic_kth(const EmpiricalDist& p,
                                          const EstimatorConfig& cfg) {
  validate_cfg(cfg);
  if (cfg.k <= 2) throw PreconditionViolated("moment order must exceed 2");
  const int n = p.n(), d = p.dim();
  const double et = eps_tilde(cfg, n, d);
  const double c1 = 2.0, c2 = 2.0;
  const double threshold = 1.0 + c1 * std::pow(et, 1.0 - 2.0 / cfg.k) +
                           c2 * std::sqrt(d * std::log(std::max(d, 2)) / n);
  return filter_loop(p, cfg, threshold);
}

// ---- W1 moment projection ---------------------------------------------------------

EstimatorReport w1_project_moment(const EmpiricalDist& p, const EstimatorConfig& cfg) {
  validate_cfg(cfg);
  if (cfg.k < 2) throw PreconditionViolated("moment order must be >= 2");
  const EmpiricalDist sorted = p.lex_sorted();
  const int n = sorted.n(), d = sorted.dim();
  const Eigen::VectorXd& w = sorted.weights();
  Eigen::MatrixXd Y = sorted.points();
  const double budget = 2.0 * std::pow(cfg.sigma, cfg.k);

  auto moment_along = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXd t = Y * v;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += w[i] * ipow(std::abs(t[i]), cfg.k);
    return acc;
  };

  // Fixed probe directions certify the constraint beyond the adversarially
  // found worst direction.
  std::vector<Eigen::VectorXd> probes = sphere_sample_with_axes(d, 64, split_seed(cfg.seed, 0x960));

  auto worst_direction = [&](const Eigen::VectorXd& hint) {
    std::vector<Eigen::VectorXd> starts;
    if (hint.size() == d) starts.push_back(hint);
    starts.push_back(top_eigenpair(Y.transpose() * w.asDiagonal() * Y,
                                   split_seed(cfg.seed, 0x3161))
                         .vector);
    auto rng = make_rng(split_seed(cfg.seed, 0x57a7));
    for (int r = 0; r < 3; ++r) starts.push_back(random_unit(d, rng));

    Eigen::VectorXd best_v = starts.front();
    double best = -1.0;
    for (auto v : starts) {
      double step = 0.3;
      double cur = moment_along(v);
      for (int it = 0; it < 60; ++it) {
        const Eigen::VectorXd t = Y * v;
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(d);
        for (int i = 0; i < n; ++i) {
          const double a = std::abs(t[i]);
          if (a == 0.0) continue;
          grad += w[i] * cfg.k * ipow(a, cfg.k - 1) * (t[i] >= 0 ? 1.0 : -1.0) *
                  Y.row(i).transpose();
        }
        const double gn = grad.norm();
        if (gn == 0.0) break;
        Eigen::VectorXd cand = v + step * grad / gn;
        cand /= cand.norm();
        const double m = moment_along(cand);
        if (m > cur) {
          v = cand;
          cur = m;
        } else {
          step *= 0.7;
          if (step < 1e-4) break;
        }
      }
      if (cur > best) {
        best = cur;
        best_v = v;
      }
    }
    return std::pair<Eigen::VectorXd, double>(best_v, best);
  };

  Eigen::VectorXd hint;
  int rounds = 0;
  for (; rounds < 200; ++rounds) {
    auto [v, m] = worst_direction(hint);
    // A probe direction may beat the ascent's local optimum.
    for (const auto& pr : probes) {
      const double mp = moment_along(pr);
      if (mp > m) {
        m = mp;
        v = pr;
      }
    }
    if (m <= budget * (1.0 + 1e-6)) break;
    hint = v;

    // Clip the 1-d coordinates along v beyond +-tau, with tau the largest
    // level restoring the constraint along v.
    const Eigen::VectorXd t = Y * v;
    double hi = t.cwiseAbs().maxCoeff(), lo = 0.0;
    auto clipped_moment = [&](double tau) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i)
        acc += w[i] * ipow(std::min(std::abs(t[i]), tau), cfg.k);
      return acc;
    };
    for (int it = 0; it < 100 && hi - lo > 1e-12 * (1.0 + hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (clipped_moment(mid) <= budget)
        lo = mid;
      else
        hi = mid;
    }
    const double tau = lo;
    for (int i = 0; i < n; ++i) {
      const double a = std::abs(t[i]);
      if (a > tau) {
        const double target = (t[i] >= 0 ? tau : -tau);
        Y.row(i) += ((target - t[i]) * v).transpose();
      }
    }
  }
  if (rounds >= 200) throw NoConvergence("moment projection did not settle");

  double spent = 0.0;
  for (int i = 0; i < n; ++i)
    spent += w[i] * (Y.row(i) - sorted.points().row(i)).norm();

  EmpiricalDist q(Y, w);
  EstimatorReport rep{weighted_mean(q),
                      weighted_second_moment(q),
                      q,
                      0.0,
                      spent,
                      rounds,
                      0.0};
  return rep;
}

// ---- robust linear regression -------------------------------------------------------

Eigen::VectorXd ols_theta(const EmpiricalDist& joint_xy) {
  const int d = joint_xy.dim();
  if (d < 2) throw DimensionMismatch("joint (x, y) data needs >= 2 columns");
  const Eigen::MatrixXd X = joint_xy.points().leftCols(d - 1);
  const Eigen::VectorXd y = joint_xy.points().col(d - 1);
  return solve_ols(X, y, joint_xy.weights());
}

EstimatorReport robust_linreg_tv(const EmpiricalDist& joint_xy,
                                 const EstimatorConfig& cfg) {
  validate_cfg(cfg);
  const EmpiricalDist sorted = joint_xy.lex_sorted();
  const int d = sorted.dim();
  if (d < 2) throw DimensionMismatch("joint (x, y) data needs >= 2 columns");
  const int n = sorted.n();
  const Eigen::MatrixXd X = sorted.points().leftCols(d - 1);
  const Eigen::VectorXd y = sorted.points().col(d - 1);
  const Eigen::VectorXd& w = sorted.weights();

  const double et = eps_tilde(cfg, n, d);
  const double mass_budget = std::min(kMassCap, 3.0 * et);

  Eigen::VectorXd c = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd theta;
  double prev_lambda = std::numeric_limits<double>::infinity();
  int iters = 0;
  double removed = 0.0;

  for (;; ++iters) {
    const Eigen::VectorXd cw = c.cwiseProduct(w);
    const double kept = cw.sum();
    removed = 1.0 - kept;
    theta = solve_ols(X, y, cw);
    if (removed >= mass_budget || iters >= n + 10) break;

    const Eigen::VectorXd z = y - X * theta;
    // Spectral statistic of the per-point gradients g_i = z_i x_i.
    Eigen::MatrixXd G = X.array().colwise() * z.array();
    Eigen::MatrixXd M =
        G.transpose() * (cw / kept).asDiagonal() * G;
    const auto top = top_eigenpair(M, split_seed(cfg.seed, 0x119, iters));
    if (top.value >= prev_lambda * (1.0 - 1e-3) && iters >= 1) break;  // stabilized
    prev_lambda = top.value;

    const Eigen::VectorXd proj = G * top.vector;
    double tau_max = 0.0;
    for (int i = 0; i < n; ++i)
      if (cw[i] > 0.0) tau_max = std::max(tau_max, proj[i] * proj[i]);
    if (tau_max <= 0.0) break;  // residuals vanished; nothing left to filter
    for (int i = 0; i < n; ++i)
      if (cw[i] > 0.0) c[i] *= 1.0 - (proj[i] * proj[i]) / tau_max;
  }

  const double norm = theta.norm();
  if (norm > cfg.R) theta *= cfg.R / norm;

  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (c[i] * w[i] > 0.0) keep.push_back(i);
  Eigen::MatrixXd pts(static_cast<int>(keep.size()), d);
  Eigen::VectorXd ws(static_cast<int>(keep.size()));
  const double kept = 1.0 - removed;
  for (size_t r = 0; r < keep.size(); ++r) {
    pts.row(static_cast<int>(r)) = sorted.points().row(keep[r]);
    ws[static_cast<int>(r)] = c[keep[r]] * w[keep[r]] / kept;
  }

  EstimatorReport rep{theta,
                      Eigen::MatrixXd(),
                      EmpiricalDist(std::move(pts), std::move(ws)),
                      removed,
                      0.0,
                      iters,
                      0.0};
  return rep;
}

EstimatorReport robust_linreg_w1(const EmpiricalDist& joint_xy,
                                 const EstimatorConfig& cfg) {
  validate_cfg(cfg);
  const int d = joint_xy.dim();
  if (d < 2) throw DimensionMismatch("joint (x, y) data needs >= 2 columns");

  EstimatorConfig proj_cfg = cfg;
  proj_cfg.sigma = cfg.sigma * std::max(cfg.R, 1.0);
  EstimatorReport proj = w1_project_moment(joint_xy, proj_cfg);

  Eigen::VectorXd theta = ols_theta(proj.projected);
  const double norm = theta.norm();
  if (norm > cfg.R) theta *= cfg.R / norm;

  EstimatorReport rep{theta,
                      Eigen::MatrixXd(),
                      proj.projected,
                      0.0,
                      proj.transport_spent,
                      proj.iterations,
                      0.0};
  return rep;
}

}  // namespace robustkit
