#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "robustkit/adversaries.hpp"
#include "robustkit/direction.hpp"
#include "robustkit/empirical_dist.hpp"
#include "robustkit/estimators.hpp"
#include "robustkit/linalg.hpp"

using namespace robustkit;

namespace {

EmpiricalDist gaussian_sample(int n, int d, RngSeed seed, double shift = 0.0) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) pts(i, j) = gauss(rng) + shift;
  return EmpiricalDist::uniform(std::move(pts));
}

// Rebuilds the same uniform distribution from a shuffled copy of the rows,
// so both sides present identical point and weight multisets.
EmpiricalDist permute_rows(const EmpiricalDist& p, RngSeed seed) {
  std::vector<int> idx(p.n());
  std::iota(idx.begin(), idx.end(), 0);
  auto rng = make_rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  Eigen::MatrixXd pts(p.n(), p.dim());
  for (int i = 0; i < p.n(); ++i) pts.row(i) = p.points().row(idx[i]);
  return EmpiricalDist::uniform(std::move(pts));
}

EmpiricalDist affine_1d(const EmpiricalDist& p, double a, double b) {
  Eigen::MatrixXd pts = a * p.points().array() + b;
  return EmpiricalDist(std::move(pts), p.weights());
}

// Regression sample y = theta'x + noise.
EmpiricalDist regression_sample(int n, int d, const Eigen::VectorXd& theta,
                                double noise_std, RngSeed seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd pts(n, d + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) pts(i, j) = gauss(rng);
    pts(i, d) = pts.row(i).head(d) * theta + noise_std * gauss(rng);
  }
  return EmpiricalDist::uniform(std::move(pts));
}

}  // namespace

TEST_CASE("config validation") {
  const auto p = gaussian_sample(50, 1, 41);
  EstimatorConfig cfg;
  cfg.eps = 0.5;
  CHECK_THROWS_AS(robust_mean_1d(p, cfg), BadEps);
  cfg.eps = -0.01;
  CHECK_THROWS_AS(robust_mean_1d(p, cfg), BadEps);
  cfg.eps = 0.1;
  cfg.sigma = 0.0;
  CHECK_THROWS_AS(robust_mean_1d(p, cfg), PreconditionViolated);
}

TEST_CASE("1-d robust mean is exact on clean light-tailed data") {
  const auto p = gaussian_sample(2000, 1, 42);
  EstimatorConfig cfg;
  cfg.eps = 0.1;
  const auto rep = robust_mean_1d(p, cfg);
  // The clean sample already satisfies the moment gauge: nothing is trimmed.
  CHECK(rep.mass_removed <= 1e-5);
  CHECK(std::abs(rep.estimate[0] - weighted_mean(p)[0]) <= 1e-6);
}

TEST_CASE("1-d robust mean shrugs off a far point mass") {
  auto clean = gaussian_sample(1000, 1, 43);
  Eigen::MatrixXd pts(1100, 1);
  pts.topRows(1000) = clean.points();
  for (int i = 1000; i < 1100; ++i) pts(i, 0) = 80.0;
  const auto p = EmpiricalDist::uniform(std::move(pts));
  EstimatorConfig cfg;
  cfg.eps = 0.1;
  const auto rep = robust_mean_1d(p, cfg);
  // Plain mean sits near 80 * 100/1100 ~ 7.3; the projection removes the
  // planted tail and lands near zero.
  CHECK(std::abs(weighted_mean(p)[0]) > 7.0);
  CHECK(std::abs(rep.estimate[0]) < 0.5);
  CHECK(rep.mass_removed >= 100.0 / 1100.0 - 1e-3);
  CHECK(rep.mass_removed <= kMassCap + 1e-12);
}

TEST_CASE("1-d robust mean is translation and scale equivariant") {
  const auto p = gaussian_sample(400, 1, 44);
  EstimatorConfig cfg;
  cfg.eps = 0.05;
  const double base = robust_mean_1d(p, cfg).estimate[0];
  const double shifted = robust_mean_1d(affine_1d(p, 1.0, 3.25), cfg).estimate[0];
  CHECK(shifted == doctest::Approx(base + 3.25).epsilon(1e-9));
  EstimatorConfig scaled_cfg = cfg;
  scaled_cfg.sigma = 2.0 * cfg.sigma;
  const double scaled = robust_mean_1d(affine_1d(p, 2.0, 0.0), scaled_cfg).estimate[0];
  CHECK(scaled == doctest::Approx(2.0 * base).epsilon(1e-9));
}

TEST_CASE("1-d robust mean rejects a sample it cannot repair") {
  // Half the mass at a huge offset: no deletion within the cap can restore
  // the moment gauge around any candidate mean.
  Eigen::MatrixXd pts(100, 1);
  for (int i = 0; i < 50; ++i) pts(i, 0) = 0.0;
  for (int i = 50; i < 100; ++i) pts(i, 0) = 1e6;
  const auto p = EmpiricalDist::uniform(std::move(pts));
  EstimatorConfig cfg;
  cfg.eps = 0.2;
  CHECK_THROWS_AS(robust_mean_1d(p, cfg), BudgetExceeded);
}

TEST_CASE("high-d robust mean aggregates direction estimates") {
  const auto p = gaussian_sample(3000, 4, 45, 1.5);
  EstimatorConfig cfg;
  cfg.eps = 0.05;
  cfg.direction_budget = 64;
  const auto rep = robust_mean_highd(p, cfg);
  CHECK((rep.estimate - weighted_mean(p)).norm() < 0.2);
  CHECK(rep.aggregation_gap < 0.2);
  CHECK(rep.estimate.size() == 4);
}

TEST_CASE("estimators are invariant to row order") {
  auto clean = gaussian_sample(500, 3, 46);
  Eigen::MatrixXd pts(550, 3);
  pts.topRows(500) = clean.points();
  for (int i = 500; i < 550; ++i) pts.row(i) = Eigen::RowVector3d(12.0, -5.0, 3.0);
  const auto p = EmpiricalDist::uniform(std::move(pts));
  const auto q = permute_rows(p, 909);
  EstimatorConfig cfg;
  cfg.eps = 0.1;
  cfg.direction_budget = 32;

  const auto a1 = filter_mean(p, cfg);
  const auto a2 = filter_mean(q, cfg);
  CHECK((a1.estimate - a2.estimate).cwiseAbs().maxCoeff() == 0.0);

  const auto b1 = robust_mean_highd(p, cfg);
  const auto b2 = robust_mean_highd(q, cfg);
  CHECK((b1.estimate - b2.estimate).cwiseAbs().maxCoeff() == 0.0);

  const auto c1 = w1_project_moment(p, cfg);
  const auto c2 = w1_project_moment(q, cfg);
  CHECK((c1.second_moment - c2.second_moment).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectral filter keeps clean gaussian data intact") {
  const auto p = gaussian_sample(5000, 3, 47);
  EstimatorConfig cfg;
  cfg.eps = 0.1;
  const auto rep = filter_mean(p, cfg);
  CHECK(rep.mass_removed < 0.05);
  CHECK((rep.estimate - weighted_mean(p)).norm() < 0.1);
}

TEST_CASE("spectral filter removes a planted cluster") {
  auto clean = gaussian_sample(1800, 3, 48);
  Eigen::MatrixXd pts(2000, 3);
  pts.topRows(1800) = clean.points();
  for (int i = 1800; i < 2000; ++i) pts.row(i) = Eigen::RowVector3d(9.0, 9.0, 0.0);
  const auto p = EmpiricalDist::uniform(std::move(pts));
  EstimatorConfig cfg;
  cfg.eps = 0.1;
  const auto rep = filter_mean(p, cfg);
  const double plain = weighted_mean(p).norm();
  CHECK(plain > 1.0);
  CHECK(rep.estimate.norm() < 0.25);
  CHECK(rep.mass_removed > 0.05);
  CHECK(rep.iterations >= 1);
}

TEST_CASE("kth-moment filter requires k above two") {
  const auto p = gaussian_sample(100, 2, 49);
  EstimatorConfig cfg;
  cfg.eps = 0.05;
  cfg.k = 2;
  CHECK_THROWS_AS(filter_mean_isotropic_kth(p, cfg), PreconditionViolated);
}

TEST_CASE("kth-moment filter cleans heavy-tailed whitened data") {
  // Whitened student-t style sample with a planted cluster.
  auto rng = make_rng(50);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::chi_squared_distribution<double> chi2(6.0);
  const int n = 3000, d = 3;
  const double whiten = std::sqrt(6.0 / 4.0);  // population sd of t(6)
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j)
      pts(i, j) = gauss(rng) / std::sqrt(chi2(rng) / 6.0) / whiten;
  }
  for (int i = 0; i < 150; ++i) pts.row(i) = Eigen::RowVector3d(7.0, 0.0, 7.0);
  const auto p = EmpiricalDist::uniform(std::move(pts));
  EstimatorConfig cfg;
  cfg.eps = 0.05;
  cfg.k = 4;
  const auto rep = filter_mean_isotropic_kth(p, cfg);
  CHECK(rep.estimate.norm() < weighted_mean(p).norm());
  CHECK(rep.estimate.norm() < 0.3);
}

TEST_CASE("w1 moment projection satisfies its constraint with exact accounting") {
  auto clean = gaussian_sample(800, 3, 51);
  Eigen::MatrixXd pts(1000, 3);
  pts.topRows(800) = clean.points();
  for (int i = 800; i < 1000; ++i) pts.row(i) = Eigen::RowVector3d(0.0, 20.0, 0.0);
  // Pre-sort so the returned projection pairs with the input row by row.
  const auto p = EmpiricalDist::uniform(std::move(pts)).lex_sorted();
  EstimatorConfig cfg;
  cfg.eps = 0.1;
  cfg.k = 2;
  cfg.sigma = 2.0;
  const auto rep = w1_project_moment(p, cfg);

  // Exact transport bookkeeping against the returned projected sample.
  double cost = 0.0;
  for (int i = 0; i < p.n(); ++i)
    cost += p.weights()[i] * (p.points().row(i) - rep.projected.points().row(i)).norm();
  CHECK(cost == doctest::Approx(rep.transport_spent).epsilon(1e-9));
  CHECK(rep.transport_spent > 0.0);

  // The directional moment constraint holds on a fresh probe set plus axes.
  const double budget = 2.0 * std::pow(cfg.sigma, cfg.k);
  for (const auto& v : sphere_sample_with_axes(3, 200, 777)) {
    const Eigen::VectorXd proj = rep.projected.points() * v;
    double m = 0.0;
    for (int i = 0; i < proj.size(); ++i)
      m += rep.projected.weights()[i] *
           std::pow(std::abs(proj[i]), static_cast<double>(cfg.k));
    CHECK(m <= budget * (1.0 + 1e-5));
  }

  // Second moment of the projection is what is reported.
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(3, 3);
  for (int i = 0; i < rep.projected.n(); ++i) {
    const Eigen::VectorXd x = rep.projected.points().row(i).transpose();
    M += rep.projected.weights()[i] * x * x.transpose();
  }
  CHECK((M - rep.second_moment).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("w1 moment projection is a no-op inside the constraint set") {
  const auto p = gaussian_sample(500, 2, 52).lex_sorted();
  EstimatorConfig cfg;
  cfg.eps = 0.1;
  cfg.k = 2;
  cfg.sigma = 4.0;  // budget 32 dwarfs the unit second moment
  const auto rep = w1_project_moment(p, cfg);
  CHECK(rep.transport_spent == 0.0);
  CHECK((rep.projected.points() - p.points()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("robust tv regression matches ols on clean data") {
  Eigen::VectorXd theta(3);
  theta << 1.0, -2.0, 0.5;
  const auto joint = regression_sample(4000, 3, theta, 0.5, 53);
  EstimatorConfig cfg;
  cfg.eps = 0.05;
  const auto rep = robust_linreg_tv(joint, cfg);
  const Eigen::VectorXd ols = ols_theta(joint);
  CHECK((rep.estimate - ols).norm() < 0.05);
  CHECK((rep.estimate - theta).norm() < 0.1);
}

TEST_CASE("robust tv regression resists residual outliers") {
  Eigen::VectorXd theta(2);
  theta << 2.0, 0.0;
  auto joint = regression_sample(2000, 2, theta, 0.3, 54);
  Eigen::MatrixXd pts = joint.points();
  auto rng = make_rng(55);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    pts(i, 0) = 1.0 + 0.1 * gauss(rng);
    pts(i, 2) = 60.0;  // corrupted responses at benign covariates
  }
  const auto bad = EmpiricalDist::uniform(std::move(pts));
  EstimatorConfig cfg;
  cfg.eps = 0.05;
  const auto rep = robust_linreg_tv(bad, cfg);
  const Eigen::VectorXd ols = ols_theta(bad);
  CHECK((ols - theta).norm() > 5.0 * (rep.estimate - theta).norm());
  CHECK((rep.estimate - theta).norm() < 0.5);
  CHECK(rep.mass_removed <= kMassCap + 1e-12);
}

TEST_CASE("regression norm cap binds") {
  Eigen::VectorXd theta(2);
  theta << 30.0, -40.0;  // norm 50
  const auto joint = regression_sample(1500, 2, theta, 0.1, 56);
  EstimatorConfig cfg;
  cfg.eps = 0.02;
  cfg.R = 1.0;
  const auto tv = robust_linreg_tv(joint, cfg);
  CHECK(tv.estimate.norm() <= 1.0 + 1e-9);
  const auto w1 = robust_linreg_w1(joint, cfg);
  CHECK(w1.estimate.norm() <= 1.0 + 1e-9);
}

TEST_CASE("regression on an all-zero sample returns the min-norm fit") {
  const auto joint =
      EmpiricalDist::uniform(Eigen::MatrixXd::Zero(200, 3));
  EstimatorConfig cfg;
  cfg.eps = 0.1;
  const auto tv = robust_linreg_tv(joint, cfg);
  CHECK(tv.estimate.norm() == 0.0);
  const auto w1 = robust_linreg_w1(joint, cfg);
  CHECK(w1.estimate.norm() == 0.0);
  CHECK(ols_theta(joint).norm() == 0.0);
}

TEST_CASE("w1 regression survives a response transport attack") {
  Eigen::VectorXd theta(2);
  theta << 1.0, 1.0;
  const auto joint = regression_sample(3000, 2, theta, 0.2, 57);
  Eigen::VectorXd ey = Eigen::VectorXd::Unit(3, 2);
  const auto attacked = corrupt_w1(joint, 2.0, W1Strategy::top_k(ey, 30), 58);
  EstimatorConfig cfg;
  cfg.eps = 0.1;
  cfg.R = 5.0;
  cfg.k = 4;
  const auto rep = robust_linreg_w1(attacked.corrupted, cfg);
  const Eigen::VectorXd ols = ols_theta(attacked.corrupted);
  CHECK((rep.estimate - theta).norm() <= (ols - theta).norm() + 1e-12);
  CHECK((rep.estimate - theta).norm() < 1.0);
}
