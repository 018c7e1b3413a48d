#include "robustkit/distances.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include "sorted1d.hpp"

namespace robustkit {

namespace {

constexpr double kMergeTol = 1e-12;

// ---- KS core on raw projected scalars -------------------------------------

struct KsOutcome {
  double value = 0.0;
  double threshold = 0.0;
};

KsOutcome ks_core(const Eigen::VectorXd& pv, const Eigen::VectorXd& pw,
                  const Eigen::VectorXd& qv, const Eigen::VectorXd& qw) {
  const auto sp = detail::make_sorted(pv, pw, kMergeTol);
  const auto sq = detail::make_sorted(qv, qw, kMergeTol);
  // Two-pointer CDF sweep over the merged grid.
  size_t ip = 0, iq = 0;
  double Fp = 0.0, Fq = 0.0;
  KsOutcome out;
  out.threshold = sp.x.front();
  while (ip < sp.x.size() || iq < sq.x.size()) {
    double z;
    if (iq >= sq.x.size())
      z = sp.x[ip];
    else if (ip >= sp.x.size())
      z = sq.x[iq];
    else
      z = std::min(sp.x[ip], sq.x[iq]);
    while (ip < sp.x.size() && sp.x[ip] <= z + kMergeTol) Fp += sp.w[ip++];
    while (iq < sq.x.size() && sq.x[iq] <= z + kMergeTol) Fq += sq.w[iq++];
    const double gap = std::abs(Fp - Fq);
    if (gap > out.value) {
      out.value = gap;
      out.threshold = z;
    }
  }
  return out;
}

// ---- weakened-W1 core along one projection ---------------------------------

struct W1DirOutcome {
  double value = 0.0;
  double knee = 0.0;    // ReLU witness location
  bool linear = false;  // witness is the linear functional
};

W1DirOutcome w1_dir_core(const Eigen::VectorXd& pv, const Eigen::VectorXd& pw,
                         const Eigen::VectorXd& qv, const Eigen::VectorXd& qw) {
  const auto sp = detail::make_sorted(pv, pw, kMergeTol);
  const auto sq = detail::make_sorted(qv, qw, kMergeTol);
  W1DirOutcome out;
  out.value = std::abs(sp.mean() - sq.mean());
  out.linear = true;
  // sup_a |E_p (X-a)_+ - E_q (X-a)_+| is piecewise linear in a with knees at
  // sample values; the a -> -inf limit equals the mean gap handled above.
  const auto grid = detail::merged_grid(sp, sq, kMergeTol);
  // Sweep from the right maintaining suffix mass and suffix weighted sums.
  size_t ip = sp.x.size(), iq = sq.x.size();
  double mass_p = 0.0, sum_p = 0.0, mass_q = 0.0, sum_q = 0.0;
  for (size_t gi = grid.size(); gi-- > 0;) {
    const double a = grid[gi];
    while (ip > 0 && sp.x[ip - 1] > a + kMergeTol) {
      --ip;
      mass_p += sp.w[ip];
      sum_p += sp.w[ip] * sp.x[ip];
    }
    while (iq > 0 && sq.x[iq - 1] > a + kMergeTol) {
      --iq;
      mass_q += sq.w[iq];
      sum_q += sq.w[iq] * sq.x[iq];
    }
    const double tp = sum_p - a * mass_p;  // E_p (X - a)_+
    const double tq = sum_q - a * mass_q;
    const double gap = std::abs(tp - tq);
    if (gap > out.value) {
      out.value = gap;
      out.knee = a;
      out.linear = false;
    }
  }
  return out;
}

// ---- generic hill-climb refinement over the sphere -------------------------

// Shared by the weakened distances: 100 steps of coordinate perturbation
// projected back to the sphere, shrinking the step when nothing improves.
template <typename Eval>
void refine_direction(Eigen::VectorXd& v, double& best, const Eval& eval) {
  const int d = static_cast<int>(v.size());
  if (d <= 1) return;
  double delta = 0.25;
  for (int step = 0; step < 100; ++step) {
    const int coord = step % d;
    bool improved = false;
    for (double sgn : {1.0, -1.0}) {
      Eigen::VectorXd cand = v;
      cand[coord] += sgn * delta;
      const double norm = cand.norm();
      if (norm < 1e-12) continue;
      cand /= norm;
      const double val = eval(cand);
      if (val > best + 1e-15) {
        best = val;
        v = cand;
        improved = true;
      }
    }
    if (!improved) delta *= 0.8;
  }
}

}  // namespace

// ---- witness re-evaluation --------------------------------------------------

double reevaluate_witness(const DistanceWitness& w, const EmpiricalDist& p,
                          const EmpiricalDist& q) {
  if (w.metric == "tv") {
    // Mass of the stored event under both sides.
    auto mass_of = [&](const EmpiricalDist& dist) {
      double m = 0.0;
      for (int i = 0; i < dist.n(); ++i) {
        for (int r = 0; r < w.event.rows(); ++r) {
          if ((dist.points().row(i) - w.event.row(r)).cwiseAbs().maxCoeff() <= kMergeTol) {
            m += dist.weights()[i];
            break;
          }
        }
      }
      return m;
    };
    return mass_of(p) - mass_of(q);
  }
  if (w.metric == "ks") {
    auto upper = [&](const EmpiricalDist& dist) {
      double m = 0.0;
      for (int i = 0; i < dist.n(); ++i)
        if (dist.points()(i, 0) > w.threshold + kMergeTol) m += dist.weights()[i];
      return m;
    };
    return std::abs(upper(p) - upper(q));
  }
  if (w.metric == "tvtilde") {
    auto project = [&](const EmpiricalDist& dist) -> Eigen::VectorXd {
      if (w.v2.size() > 0)
        return (dist.project(w.v).array().square() -
                dist.project(w.v2).array().square())
            .matrix();
      return dist.project(w.v);
    };
    const Eigen::VectorXd fp = project(p), fq = project(q);
    double mp = 0.0, mq = 0.0;
    for (int i = 0; i < fp.size(); ++i)
      if (fp[i] > w.threshold + kMergeTol) mp += p.weights()[i];
    for (int i = 0; i < fq.size(); ++i)
      if (fq[i] > w.threshold + kMergeTol) mq += q.weights()[i];
    return std::abs(mp - mq);
  }
  if (w.metric == "w1") {
    double cost = 0.0;
    for (int r = 0; r < w.plan_m.size(); ++r)
      cost += w.plan_m[r] * (w.plan_x.row(r) - w.plan_y.row(r)).norm();
    return cost;
  }
  if (w.metric == "w1tilde") {
    const Eigen::VectorXd fp = p.project(w.v), fq = q.project(w.v);
    if (w.linear) {
      return std::abs(fp.dot(p.weights()) - fq.dot(q.weights()));
    }
    double tp = 0.0, tq = 0.0;
    for (int i = 0; i < fp.size(); ++i) tp += p.weights()[i] * std::max(0.0, fp[i] - w.threshold);
    for (int i = 0; i < fq.size(); ++i) tq += q.weights()[i] * std::max(0.0, fq[i] - w.threshold);
    return std::abs(tp - tq);
  }
  throw UnknownStrategy("unknown witness metric: " + w.metric);
}

// ---- total variation ---------------------------------------------------------

DistanceReport tv_discrete(const EmpiricalDist& p, const EmpiricalDist& q) {
  if (p.dim() != q.dim()) throw DimensionMismatch("tv_discrete dimension mismatch");
  const int d = p.dim();

  // Pool atoms of both sides, sort lexicographically, merge within tolerance,
  // and accumulate per-side masses.
  struct Row {
    Eigen::VectorXd x;
    double wp, wq;
  };
  std::vector<Row> rows;
  rows.reserve(p.n() + q.n());
  for (int i = 0; i < p.n(); ++i)
    rows.push_back({p.points().row(i).transpose(), p.weights()[i], 0.0});
  for (int i = 0; i < q.n(); ++i)
    rows.push_back({q.points().row(i).transpose(), 0.0, q.weights()[i]});
  std::sort(rows.begin(), rows.end(), [&](const Row& a, const Row& b) {
    for (int c = 0; c < d; ++c)
      if (a.x[c] != b.x[c]) return a.x[c] < b.x[c];
    return false;
  });
  std::vector<Row> merged;
  for (auto& r : rows) {
    if (!merged.empty() &&
        (r.x - merged.back().x).cwiseAbs().maxCoeff() <= kMergeTol) {
      merged.back().wp += r.wp;
      merged.back().wq += r.wq;
    } else {
      merged.push_back(std::move(r));
    }
  }

  double tv = 0.0;
  std::vector<int> event_rows;
  for (size_t i = 0; i < merged.size(); ++i) {
    if (merged[i].wp > merged[i].wq) {
      tv += merged[i].wp - merged[i].wq;
      event_rows.push_back(static_cast<int>(i));
    }
  }

  DistanceReport rep;
  rep.value = tv;
  rep.witness.metric = "tv";
  rep.witness.event.resize(static_cast<int>(event_rows.size()), d);
  for (size_t r = 0; r < event_rows.size(); ++r)
    rep.witness.event.row(static_cast<int>(r)) = merged[event_rows[r]].x.transpose();
  return rep;
}

// ---- Kolmogorov-Smirnov -------------------------------------------------------

DistanceReport ks_1d(const EmpiricalDist& p, const EmpiricalDist& q) {
  if (p.dim() != 1 || q.dim() != 1) throw DimensionMismatch("ks_1d expects 1-d inputs");
  const auto ks = ks_core(p.values_1d(), p.weights(), q.values_1d(), q.weights());
  DistanceReport rep;
  rep.value = ks.value;
  rep.witness.metric = "ks";
  rep.witness.threshold = ks.threshold;
  return rep;
}

// ---- weakened TV ---------------------------------------------------------------

DistanceReport tvtilde(const EmpiricalDist& p, const EmpiricalDist& q,
                       const ProjectionFamily& fam) {
  if (p.dim() != q.dim()) throw DimensionMismatch("tvtilde dimension mismatch");
  if (fam.size() < 1) throw PreconditionViolated("empty projection family");

  double best = -1.0;
  int best_idx = 0;
  for (int i = 0; i < fam.size(); ++i) {
    const auto ks = ks_core(fam.evaluate(p, i), p.weights(), fam.evaluate(q, i), q.weights());
    if (ks.value > best) {
      best = ks.value;
      best_idx = i;
    }
  }

  DistanceReport rep;
  rep.witness.metric = "tvtilde";

  if (fam.kind == ProjectionFamily::Kind::Linear) {
    Eigen::VectorXd v = fam.dirs[best_idx];
    double val = best;
    refine_direction(v, val, [&](const Eigen::VectorXd& cand) {
      return ks_core(p.project(cand), p.weights(), q.project(cand), q.weights()).value;
    });
    // Recompute the threshold at the final direction.
    const auto ks = ks_core(p.project(v), p.weights(), q.project(v), q.weights());
    rep.value = ks.value;
    rep.witness.v = v;
    rep.witness.threshold = ks.threshold;
    return rep;
  }

  // QuadDiff: refine both legs alternately.
  auto [v1, v2] = fam.pairs[best_idx];
  const int d = p.dim();
  auto eval_pair = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    Eigen::VectorXd fp = Eigen::VectorXd::Zero(p.n());
    Eigen::VectorXd fq = Eigen::VectorXd::Zero(q.n());
    if (a.squaredNorm() > 0) {
      fp += p.project(a).array().square().matrix();
      fq += q.project(a).array().square().matrix();
    }
    if (b.squaredNorm() > 0) {
      fp -= p.project(b).array().square().matrix();
      fq -= q.project(b).array().square().matrix();
    }
    return ks_core(fp, p.weights(), fq, q.weights());
  };
  double val = best;
  double delta = 0.25;
  for (int step = 0; step < 100; ++step) {
    const int coord = (step / 2) % d;
    const bool first_leg = (step % 2 == 0);
    Eigen::VectorXd& leg = first_leg ? v1 : v2;
    if (leg.squaredNorm() == 0) continue;  // one-legged pairs stay one-legged
    bool improved = false;
    for (double sgn : {1.0, -1.0}) {
      Eigen::VectorXd cand = leg;
      cand[coord] += sgn * delta;
      const double norm = cand.norm();
      if (norm < 1e-12) continue;
      cand /= norm;
      const auto ks = first_leg ? eval_pair(cand, v2) : eval_pair(v1, cand);
      if (ks.value > val + 1e-15) {
        val = ks.value;
        leg = cand;
        improved = true;
      }
    }
    if (!improved) delta *= 0.8;
  }
  const auto ks = eval_pair(v1, v2);
  rep.value = ks.value;
  rep.witness.v = v1;
  rep.witness.v2 = v2;
  rep.witness.threshold = ks.threshold;
  return rep;
}

// ---- Wasserstein-1 (1-d, exact) --------------------------------------------------

DistanceReport w1_1d(const EmpiricalDist& p, const EmpiricalDist& q) {
  if (p.dim() != 1 || q.dim() != 1) throw DimensionMismatch("w1_1d expects 1-d inputs");
  const auto sp = detail::make_sorted(p.values_1d(), p.weights(), 0.0);
  const auto sq = detail::make_sorted(q.values_1d(), q.weights(), 0.0);

  // Quantile coupling: pair mass in sorted order.
  struct PlanRow {
    double x, y, m;
  };
  std::vector<PlanRow> plan;
  size_t ip = 0, iq = 0;
  double rp = sp.w[0], rq = sq.w[0];
  double cost = 0.0;
  while (ip < sp.x.size() && iq < sq.x.size()) {
    const double m = std::min(rp, rq);
    if (m > 0) {
      plan.push_back({sp.x[ip], sq.x[iq], m});
      cost += m * std::abs(sp.x[ip] - sq.x[iq]);
    }
    rp -= m;
    rq -= m;
    if (rp <= 1e-18) {
      if (++ip < sp.x.size()) rp = sp.w[ip];
    }
    if (rq <= 1e-18) {
      if (++iq < sq.x.size()) rq = sq.w[iq];
    }
  }

  DistanceReport rep;
  rep.value = cost;
  rep.witness.metric = "w1";
  const int rows = static_cast<int>(plan.size());
  rep.witness.plan_x.resize(rows, 1);
  rep.witness.plan_y.resize(rows, 1);
  rep.witness.plan_m.resize(rows);
  for (int r = 0; r < rows; ++r) {
    rep.witness.plan_x(r, 0) = plan[r].x;
    rep.witness.plan_y(r, 0) = plan[r].y;
    rep.witness.plan_m[r] = plan[r].m;
  }
  return rep;
}

// ---- weakened W1 -------------------------------------------------------------------

DistanceReport w1tilde(const EmpiricalDist& p, const EmpiricalDist& q,
                       const std::vector<Eigen::VectorXd>& dirs) {
  if (p.dim() != q.dim()) throw DimensionMismatch("w1tilde dimension mismatch");
  if (dirs.empty()) throw PreconditionViolated("w1tilde needs at least one direction");

  double best = -1.0;
  Eigen::VectorXd best_v;
  for (const auto& v : dirs) {
    const auto res = w1_dir_core(p.project(v), p.weights(), q.project(v), q.weights());
    if (res.value > best) {
      best = res.value;
      best_v = v;
    }
  }
  double val = best;
  refine_direction(best_v, val, [&](const Eigen::VectorXd& cand) {
    return w1_dir_core(p.project(cand), p.weights(), q.project(cand), q.weights()).value;
  });
  const auto fin = w1_dir_core(p.project(best_v), p.weights(), q.project(best_v), q.weights());

  DistanceReport rep;
  rep.value = fin.value;
  rep.witness.metric = "w1tilde";
  rep.witness.v = best_v;
  rep.witness.linear = fin.linear;
  rep.witness.threshold = fin.knee;
  return rep;
}

DistanceReport w1tilde(const EmpiricalDist& p, const EmpiricalDist& q, RngSeed seed,
                       int budget) {
  return w1tilde(p, q, sphere_sample_with_axes(p.dim(), budget, seed));
}

}  // namespace robustkit
