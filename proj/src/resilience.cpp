#include "robustkit/resilience.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "robustkit/linalg.hpp"
#include "sorted1d.hpp"

namespace robustkit {

namespace {

// Remainder after deleting `eta` mass from one tail of a sorted sample,
// renormalized. Deleting from the top minimizes the mean; from the bottom
// maximizes it. The deletion polytope {0 <= d_i <= w_i, sum d_i = eta} has a
// linear objective here, so a tail-greedy deletion with one fractional
// boundary atom is exact.
detail::Sorted1D trim_tail(const detail::Sorted1D& s, double eta, bool from_top) {
  detail::Sorted1D out;
  out.x = s.x;
  out.w = s.w;
  double left = eta;
  if (from_top) {
    for (size_t i = out.w.size(); i-- > 0 && left > 0;) {
      const double take = std::min(out.w[i], left);
      out.w[i] -= take;
      left -= take;
    }
  } else {
    for (size_t i = 0; i < out.w.size() && left > 0; ++i) {
      const double take = std::min(out.w[i], left);
      out.w[i] -= take;
      left -= take;
    }
  }
  const double kept = 1.0 - eta;
  out.total = 0.0;
  for (auto& w : out.w) {
    w /= kept;
    out.total += w;
  }
  return out;
}

EmpiricalDist to_dist(const detail::Sorted1D& s) {
  std::vector<double> xs, ws;
  for (size_t i = 0; i < s.x.size(); ++i) {
    if (s.w[i] > 0) {
      xs.push_back(s.x[i]);
      ws.push_back(s.w[i]);
    }
  }
  if (xs.empty()) throw BadEta("deletion removed all mass");
  return EmpiricalDist::weighted_1d(xs, ws);
}

// Both one-sided trim means on pre-sorted data, without building dists.
struct TrimMeans {
  double plain, after_upper, after_lower;
};
TrimMeans trim_means(const detail::Sorted1D& s, double eta) {
  const double plain = s.mean();
  if (eta == 0.0) return {plain, plain, plain};
  double upper_deleted_sum = 0.0, left = eta;
  for (size_t i = s.w.size(); i-- > 0 && left > 1e-18;) {
    const double take = std::min(s.w[i], left);
    upper_deleted_sum += take * s.x[i];
    left -= take;
  }
  double lower_deleted_sum = 0.0;
  left = eta;
  for (size_t i = 0; i < s.w.size() && left > 1e-18; ++i) {
    const double take = std::min(s.w[i], left);
    lower_deleted_sum += take * s.x[i];
    left -= take;
  }
  const double total_sum = plain;  // weights sum to 1
  const double after_upper = (total_sum - upper_deleted_sum) / (1.0 - eta);
  const double after_lower = (total_sum - lower_deleted_sum) / (1.0 - eta);
  return {plain, after_upper, after_lower};
}

void validate_eta(double eta) {
  if (!(eta >= 0.0) || !(eta < 1.0) || !std::isfinite(eta))
    throw BadEta("eta must lie in [0, 1)");
}

}  // namespace

TrimResult worst_deletion_1d(const EmpiricalDist& p, double eta) {
  if (p.dim() != 1) throw DimensionMismatch("worst_deletion_1d expects 1-d input");
  validate_eta(eta);
  const auto s = detail::make_sorted(p.values_1d(), p.weights(), 0.0);
  const auto means = trim_means(s, eta);
  TrimResult out{means.plain,
                 means.after_upper,
                 means.after_lower,
                 std::max(std::abs(means.after_upper - means.plain),
                          std::abs(means.after_lower - means.plain)),
                 to_dist(trim_tail(s, eta, /*from_top=*/true)),
                 to_dist(trim_tail(s, eta, /*from_top=*/false))};
  return out;
}

ResilienceProfile resilience_profile(const EmpiricalDist& p,
                                     const std::vector<double>& etas, int budget,
                                     RngSeed seed) {
  for (double e : etas) validate_eta(e);
  std::vector<Eigen::VectorXd> dirs = sphere_sample_with_axes(p.dim(), budget, seed);
  if (p.dim() > 1) {
    const auto eig = top_k_eigenpairs(weighted_covariance(p), 3, split_seed(seed, 0xe16));
    for (const auto& ep : eig)
      if (ep.vector.norm() > 0.5) dirs.push_back(ep.vector);
  }

  ResilienceProfile prof;
  prof.etas = etas;
  prof.rho.assign(etas.size(), 0.0);
  prof.witness_dirs.assign(etas.size(), dirs.front());

  for (const auto& v : dirs) {
    const auto s = detail::make_sorted(p.project(v), p.weights(), 0.0);
    for (size_t e = 0; e < etas.size(); ++e) {
      const auto m = trim_means(s, etas[e]);
      const double gap = std::max(std::abs(m.after_upper - m.plain),
                                  std::abs(m.after_lower - m.plain));
      if (gap > prof.rho[e]) {
        prof.rho[e] = gap;
        prof.witness_dirs[e] = v;
      }
    }
  }
  return prof;
}

double orlicz_resilience_bound(double sigma, const OrliczFunction& psi, double eta) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw PreconditionViolated("sigma must be nonnegative");
  validate_eta(eta);
  if (eta == 0.0) return 0.0;
  const double deletion_branch = sigma * eta * psi.psi_inv(1.0 / eta) / (1.0 - eta);
  const double containment_branch = sigma * psi.psi_inv(1.0 / (1.0 - eta));
  return std::min(deletion_branch, containment_branch);
}

TailBoundResult tail_bound_check(const Eigen::VectorXd& values,
                                 const Eigen::VectorXd& weights, double rho,
                                 double eta) {
  if (values.size() != weights.size()) throw DimensionMismatch("tail_bound_check");
  if (!(eta > 0.0) || !(eta < 1.0)) throw BadEta("eta must lie in (0, 1)");
  if (!(rho >= 0.0)) throw PreconditionViolated("rho must be nonnegative");
  const double mean = values.dot(weights) / weights.sum();
  TailBoundResult r;
  r.threshold = (1.0 - eta) * rho / eta;
  // Atoms exactly at the threshold are allowed by the deletion argument (a
  // single-atom tail slice sits at T identically), so the strict comparison
  // carries a small relative guard against rounding.
  const double guard = 1e-9 * std::max(1.0, std::abs(r.threshold));
  for (int i = 0; i < values.size(); ++i) {
    const double dev = values[i] - mean;
    if (dev > r.threshold + guard) r.upper_mass += weights[i];
    if (-dev > r.threshold + guard) r.lower_mass += weights[i];
  }
  r.ok = r.upper_mass <= eta + 1e-12 && r.lower_mass <= eta + 1e-12;
  return r;
}

TailBoundResult tail_bound_check(const EmpiricalDist& p1d, double rho, double eta) {
  return tail_bound_check(p1d.values_1d(), p1d.weights(), rho, eta);
}

MidpointResult tv_midpoint(const EmpiricalDist& p, const EmpiricalDist& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch("tv_midpoint dimension mismatch");
  const auto rep = tv_discrete(p, q);
  if (rep.value >= 1.0 - 1e-12)
    throw DisjointSupports("tv_midpoint: supports are disjoint (TV = 1)");

  // min(p, q) on the merged support, renormalized by 1 - TV.
  const int d = p.dim();
  struct Row {
    Eigen::VectorXd x;
    double wp, wq;
  };
  std::vector<Row> rows;
  for (int i = 0; i < p.n(); ++i)
    rows.push_back({p.points().row(i).transpose(), p.weights()[i], 0.0});
  for (int i = 0; i < q.n(); ++i)
    rows.push_back({q.points().row(i).transpose(), 0.0, q.weights()[i]});
  std::sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
    for (int c = 0; c < d; ++c)
      if (a.x[c] != b.x[c]) return a.x[c] < b.x[c];
    return false;
  });
  std::vector<Eigen::VectorXd> pts;
  std::vector<double> ws;
  size_t i = 0;
  while (i < rows.size()) {
    Eigen::VectorXd x = rows[i].x;
    double wp = 0.0, wq = 0.0;
    while (i < rows.size() && (rows[i].x - x).cwiseAbs().maxCoeff() <= 1e-12) {
      wp += rows[i].wp;
      wq += rows[i].wq;
      ++i;
    }
    const double m = std::min(wp, wq);
    if (m > 0) {
      pts.push_back(x);
      ws.push_back(m / (1.0 - rep.value));
    }
  }
  if (pts.empty()) throw DisjointSupports("tv_midpoint: no common mass");
  Eigen::MatrixXd P(static_cast<int>(pts.size()), d);
  Eigen::VectorXd W(static_cast<int>(ws.size()));
  for (size_t r = 0; r < pts.size(); ++r) {
    P.row(static_cast<int>(r)) = pts[r].transpose();
    W[static_cast<int>(r)] = ws[r];
  }
  return MidpointResult{EmpiricalDist(std::move(P), std::move(W)), rep.value};
}

MeanCrossTvResult mean_cross_tv(const EmpiricalDist& p, const EmpiricalDist& q,
                                double eps) {
  if (p.dim() != 1 || q.dim() != 1)
    throw DimensionMismatch("mean_cross_tv expects 1-d inputs");
  if (!(eps >= 0.0) || !(eps < 1.0)) throw BadEps("eps must lie in [0, 1)");
  const auto ks = ks_1d(p, q);
  if (ks.value > eps + 1e-12)
    throw PreconditionViolated("mean_cross_tv: KS distance exceeds eps");
  const auto sp = detail::make_sorted(p.values_1d(), p.weights(), 0.0);
  const auto sq = detail::make_sorted(q.values_1d(), q.weights(), 0.0);
  return MeanCrossTvResult{to_dist(trim_tail(sp, eps, /*from_top=*/true)),
                           to_dist(trim_tail(sq, eps, /*from_top=*/false)),
                           ks.value};
}

// ---- convex-order mean-cross construction ------------------------------------

namespace {

// E (X - a)_+ and E (a - X)_+ on atom vectors (weights normalized).
double upper_integral(const std::vector<double>& x, const std::vector<double>& w,
                      double a) {
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] > a) acc += w[i] * (x[i] - a);
  return acc;
}
double lower_integral(const std::vector<double>& x, const std::vector<double>& w,
                      double a) {
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] < a) acc += w[i] * (a - x[i]);
  return acc;
}
double mean_of(const std::vector<double>& x, const std::vector<double>& w) {
  double acc = 0.0;
  for (size_t i = 0; i < x.size(); ++i) acc += x[i] * w[i];
  return acc;
}

// Solve target = integral(tau) by bisection to absolute tolerance 1e-10.
template <typename F>
double bisect_threshold(double lo, double hi, double target, const F& integral) {
  // integral must be monotone over [lo, hi] with integral(lo/hi) bracketing
  // the target.
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (integral(mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

MeanCrossW1Result mean_cross_w1(const EmpiricalDist& p, const EmpiricalDist& q,
                                double eps, IndexFn g) {
  if (p.dim() != 1 || q.dim() != 1)
    throw DimensionMismatch("mean_cross_w1 expects 1-d inputs");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw BadEps("eps must be nonnegative");

  // Certify the weakened-W1 precondition (exact in 1-d with v in {+1, -1}).
  {
    std::vector<Eigen::VectorXd> dirs{Eigen::VectorXd::Constant(1, 1.0),
                                      Eigen::VectorXd::Constant(1, -1.0)};
    const auto wrep = w1tilde(p, q, dirs);
    if (wrep.value > eps + 1e-9)
      throw PreconditionViolated("mean_cross_w1: weakened W1 exceeds eps");
  }

  auto push = [&](const EmpiricalDist& d) {
    std::vector<double> x(d.n()), w(d.n());
    for (int i = 0; i < d.n(); ++i) {
      x[i] = d.points()(i, 0);
      if (g == IndexFn::Abs) x[i] = std::abs(x[i]);
      w[i] = d.weights()[i];
    }
    return std::pair<std::vector<double>, std::vector<double>>(std::move(x), std::move(w));
  };

  auto [qx, qw] = push(p);  // squeezed side (the returned r_p)
  auto [px, pw] = push(q);  // kept side (the returned r_q)
  const EmpiricalDist pushed_p = EmpiricalDist::weighted_1d(qx, qw);

  double cost_stage = 0.0;

  // Stage 1: align the squeezed side's mean to the kept side's by
  // winsorizing the far tail, then translate out the bisection residual.
  const double mu_target = mean_of(px, pw);
  {
    const std::vector<double> before = qx;
    const double delta = mu_target - mean_of(qx, qw);
    if (std::abs(delta) > 0) {
      const double lo_x = *std::min_element(qx.begin(), qx.end());
      const double hi_x = *std::max_element(qx.begin(), qx.end());
      if (delta > 0) {
        // Raise the mean by delta: clamp below at tau
        // (lower_integral increases in tau).
        const double tau = bisect_threshold(
            lo_x, hi_x + delta + 1.0, delta,
            [&](double t) { return lower_integral(qx, qw, t); });
        for (auto& v : qx) v = std::max(v, tau);
      } else {
        // Lower the mean by |delta|: clamp above at tau
        // (upper_integral decreases in tau, so flip the bisection sense).
        double lo = lo_x - (-delta) - 1.0, hi = hi_x;
        for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (upper_integral(before, qw, mid) >= -delta)
            lo = mid;
          else
            hi = mid;
        }
        const double tau = 0.5 * (lo + hi);
        for (auto& v : qx) v = std::min(v, tau);
      }
    }
    // Exact mean repair (bisection residual is ~1e-10; shifting is cheap).
    const double resid = mu_target - mean_of(qx, qw);
    for (auto& v : qx) v += resid;
    double moved = 0.0;
    for (size_t i = 0; i < qx.size(); ++i) moved += qw[i] * std::abs(qx[i] - before[i]);
    cost_stage += moved;
  }

  // Stage 2: measure the one-sided integrated-tail excess of the squeezed
  // side over the kept side; that is exactly how much winsorization the
  // convex order requires.
  auto sup_excess = [&]() {
    double sup = 0.0;
    auto probe = [&](double z) {
      sup = std::max(sup, upper_integral(qx, qw, z) - upper_integral(px, pw, z));
    };
    for (double z : qx) probe(z);
    for (double z : px) probe(z);
    return sup;
  };

  MeanCrossW1Result out{EmpiricalDist::weighted_1d(qx, qw),
                        EmpiricalDist::weighted_1d(px, pw), 0.0, 0.0, false};

  double slack = 1e-10;
  for (int attempt = 0; attempt < 4; ++attempt) {
    const double excess = sup_excess();
    if (excess <= 0.0) break;  // already dominated
    const double A = excess + slack;
    // Equal means make the two tail integrals at mu equal up to rounding;
    // take the min so both winsorization targets are reachable.
    const double avail = std::min(upper_integral(qx, qw, mu_target),
                                  lower_integral(qx, qw, mu_target));
    std::vector<double> rx = qx;
    if (avail >= A) {
      // Symmetric winsorization by A on both tails preserves the mean and
      // subtracts exactly A from every integrated upper tail in between.
      const double hi_x = *std::max_element(rx.begin(), rx.end());
      const double lo_x = *std::min_element(rx.begin(), rx.end());
      double lo = mu_target, hi = hi_x;
      for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (upper_integral(qx, qw, mid) >= A)
          lo = mid;
        else
          hi = mid;
      }
      const double tau1 = 0.5 * (lo + hi);
      const double tau2 = bisect_threshold(
          lo_x, mu_target, A, [&](double t) { return lower_integral(qx, qw, t); });
      for (auto& v : rx) v = std::min(std::max(v, tau2), tau1);
      double moved = 0.0;
      for (size_t i = 0; i < rx.size(); ++i) moved += qw[i] * std::abs(rx[i] - qx[i]);
      const double resid = mu_target - mean_of(rx, qw);
      for (auto& v : rx) v += resid;
      cost_stage += moved + std::abs(resid);
      qx = rx;
      out.collapsed = false;
    } else {
      // Tails too thin to winsorize: collapse to the mean point; Jensen then
      // certifies the convex order against the untouched kept side.
      double moved = 0.0;
      for (size_t i = 0; i < qx.size(); ++i) moved += qw[i] * std::abs(qx[i] - mu_target);
      cost_stage += moved;
      qx.assign(qx.size(), mu_target);
      out.collapsed = true;
      break;
    }
    if (sup_excess() <= 0.0) break;
    slack *= 100.0;  // bisection residual ate the margin; retry stronger
  }

  out.r_p = EmpiricalDist::weighted_1d(qx, qw);
  out.r_q = EmpiricalDist::weighted_1d(px, pw);
  out.cost_p = w1_1d(pushed_p, out.r_p).value;
  out.cost_q = 0.0;
  assert(out.cost_p <= cost_stage + 1e-9);
  return out;
}

ClosureCheckResult deletion_closure_check(const EmpiricalDist& p1d, double eta,
                                          int trials, RngSeed seed) {
  if (p1d.dim() != 1) throw DimensionMismatch("deletion_closure_check expects 1-d");
  if (!(eta > 0.0) || !(eta < 1.0)) throw BadEta("eta must lie in (0, 1)");
  const double eta_base = eta * (2.0 - eta);
  if (eta_base >= 1.0) throw BadEta("eta(2 - eta) must stay below 1");
  const double rho_base = worst_deletion_1d(p1d, eta_base).gap;

  auto rng = make_rng(split_seed(seed, 0xc105));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Eigen::VectorXd& w = p1d.weights();
  const int n = p1d.n();

  ClosureCheckResult res;
  res.ok = true;
  for (int t = 0; t < trials; ++t) {
    // Random eta-deletion: proportional water-filling of random intensities.
    Eigen::VectorXd intensity(n);
    for (int i = 0; i < n; ++i) intensity[i] = unif(rng) * w[i];
    Eigen::VectorXd del = Eigen::VectorXd::Zero(n);
    double remaining = eta;
    std::vector<char> capped(n, 0);
    for (int round = 0; round < n && remaining > 1e-15; ++round) {
      double pool = 0.0;
      for (int i = 0; i < n; ++i)
        if (!capped[i]) pool += intensity[i];
      if (pool <= 0) break;
      bool newly_capped = false;
      const double scale = remaining / pool;
      for (int i = 0; i < n; ++i) {
        if (capped[i]) continue;
        const double want = del[i] + scale * intensity[i];
        if (want >= w[i]) {
          remaining -= (w[i] - del[i]);
          del[i] = w[i];
          capped[i] = 1;
          newly_capped = true;
        }
      }
      if (!newly_capped) {
        for (int i = 0; i < n; ++i)
          if (!capped[i]) del[i] += scale * intensity[i];
        remaining = 0.0;
      }
    }
    Eigen::VectorXd kept = (w - del) / (1.0 - (eta - remaining));
    EmpiricalDist r(p1d.points(), kept);
    const double gap_r = worst_deletion_1d(r, eta).gap;
    const double lhs = gap_r;
    const double rhs = 2.0 * rho_base + 1e-9;
    if (lhs > rhs) res.ok = false;
    if (rho_base > 1e-15) res.worst_ratio = std::max(res.worst_ratio, gap_r / rho_base);
  }
  return res;
}

}  // namespace robustkit
