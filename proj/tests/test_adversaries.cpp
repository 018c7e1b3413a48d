#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "robustkit/adversaries.hpp"
#include "robustkit/distances.hpp"
#include "robustkit/empirical_dist.hpp"

using namespace robustkit;

namespace {

EmpiricalDist gaussian_sample(int n, int d, RngSeed seed) {
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) pts(i, j) = gauss(rng);
  return EmpiricalDist::uniform(std::move(pts));
}

double transport_cost(const EmpiricalDist& a, const EmpiricalDist& b) {
  REQUIRE(a.n() == b.n());
  double acc = 0.0;
  for (int i = 0; i < a.n(); ++i)
    acc += a.weights()[i] * (a.points().row(i) - b.points().row(i)).norm();
  return acc;
}

}  // namespace

TEST_CASE("adaptive tv corruption spends exactly the replaced mass") {
  const auto clean = gaussian_sample(400, 3, 31);
  Eigen::VectorXd v = Eigen::VectorXd::Unit(3, 0);
  const std::vector<AdaptiveTvStrategy> strategies = {
      AdaptiveTvStrategy::shift_cluster(v, 8.0),
      AdaptiveTvStrategy::mean_pull(5.0 * v),
      AdaptiveTvStrategy::tail_mimic()};
  for (const auto& s : strategies) {
    for (const double eps : {0.0, 0.05, 0.125, 0.3}) {
      const auto res = corrupt_tv_adaptive(clean, eps, s, 77);
      const double tv = tv_discrete(clean, res.corrupted).value;
      // Replacements only add mass where the clean sample has none, so the
      // realized TV equals the replaced weight exactly.
      CHECK(tv == doctest::Approx(res.receipt.achieved).epsilon(1e-12));
      CHECK(res.receipt.achieved >= eps - 1e-12);
      CHECK(res.receipt.achieved <= eps + 1.0 / clean.n() + 1e-12);
      CHECK(res.receipt.affected == static_cast<int>(std::ceil(eps * clean.n() - 1e-12)));
      CHECK(res.receipt.metric == "tv");
    }
  }
}

TEST_CASE("shift cluster plants a point mass at its target") {
  const auto clean = gaussian_sample(200, 2, 32);
  Eigen::VectorXd v(2);
  v << 0.6, 0.8;
  const auto res =
      corrupt_tv_adaptive(clean, 0.1, AdaptiveTvStrategy::shift_cluster(v, 10.0), 5);
  int at_target = 0;
  for (int i = 0; i < res.corrupted.n(); ++i)
    if ((res.corrupted.points().row(i).transpose() - 10.0 * v).norm() < 1e-12)
      ++at_target;
  CHECK(at_target == 20);
}

TEST_CASE("mean pull drags the mean toward its target") {
  const auto clean = gaussian_sample(500, 2, 33);
  Eigen::VectorXd target(2);
  target << 6.0, 0.0;
  const auto res =
      corrupt_tv_adaptive(clean, 0.2, AdaptiveTvStrategy::mean_pull(target), 5);
  const double before = (weighted_mean(clean) - target).norm();
  const double after = (weighted_mean(res.corrupted) - target).norm();
  CHECK(after < before);
}

TEST_CASE("tail mimic stays on the typical radius shell") {
  const auto clean = gaussian_sample(500, 4, 34);
  const double eps = 0.1;
  const auto res = corrupt_tv_adaptive(clean, eps, AdaptiveTvStrategy::tail_mimic(), 5);
  // Replaced points are those in the corrupted sample absent from the clean
  // one; they must share a single location at a radius below the max clean
  // radius (no norm outliers introduced).
  const Eigen::VectorXd mu = weighted_mean(clean);
  double max_clean_radius = 0.0;
  for (int i = 0; i < clean.n(); ++i)
    max_clean_radius =
        std::max(max_clean_radius, (clean.points().row(i).transpose() - mu).norm());
  const double tv = tv_discrete(clean, res.corrupted).value;
  CHECK(tv == doctest::Approx(res.receipt.achieved).epsilon(1e-12));
  for (int i = 0; i < res.corrupted.n(); ++i) {
    const double r = (res.corrupted.points().row(i).transpose() - mu).norm();
    CHECK(r <= max_clean_radius + 1e-9);
  }
}

TEST_CASE("w1 strategies saturate the transport budget exactly") {
  const auto clean = gaussian_sample(300, 3, 35);
  Eigen::VectorXd v = Eigen::VectorXd::Unit(3, 1);
  const std::vector<W1Strategy> strategies = {W1Strategy::uniform_shift(v),
                                              W1Strategy::radial_inflate(),
                                              W1Strategy::top_k(v, 30)};
  for (const auto& s : strategies) {
    for (const double eps : {0.01, 0.2, 1.5}) {
      const auto res = corrupt_w1(clean, eps, s, 99);
      CHECK(res.receipt.achieved == doctest::Approx(eps).epsilon(1e-12));
      CHECK(transport_cost(clean, res.corrupted) == doctest::Approx(eps).epsilon(1e-9));
      CHECK(res.receipt.metric == "w1");
    }
  }
}

TEST_CASE("uniform shift moves every point identically") {
  const auto clean = gaussian_sample(50, 2, 36);
  Eigen::VectorXd v(2);
  v << 1.0, 0.0;
  const auto res = corrupt_w1(clean, 0.7, W1Strategy::uniform_shift(v), 1);
  for (int i = 0; i < clean.n(); ++i)
    CHECK((res.corrupted.points().row(i) - clean.points().row(i)).norm() ==
          doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("top-k concentrates the budget on the largest projections") {
  const auto clean = gaussian_sample(100, 2, 37);
  Eigen::VectorXd v = Eigen::VectorXd::Unit(2, 0);
  const auto res = corrupt_w1(clean, 0.5, W1Strategy::top_k(v, 10), 1);
  int moved = 0;
  for (int i = 0; i < clean.n(); ++i)
    if ((res.corrupted.points().row(i) - clean.points().row(i)).norm() > 1e-12) ++moved;
  CHECK(moved == 10);
  CHECK(res.receipt.affected == 10);
}

TEST_CASE("oblivious corruption mixes per draw") {
  auto contaminant = [](std::mt19937_64&) {
    Eigen::VectorXd x(2);
    x << 50.0, 0.0;
    return x;
  };
  auto source = [](std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd x(2);
    x << gauss(rng), gauss(rng);
    return x;
  };
  const auto res = corrupt_tv_oblivious(source, contaminant, 2, 0.1, 2000, 7);
  CHECK(res.corrupted.n() == 2000);
  CHECK(res.receipt.achieved == doctest::Approx(0.1).epsilon(1e-12));
  int planted = 0;
  for (int i = 0; i < res.corrupted.n(); ++i)
    if (res.corrupted.points()(i, 0) == 50.0) ++planted;
  CHECK(planted == res.receipt.affected);
  // Binomial(2000, 0.1) stays within 5 sigma of its mean.
  CHECK(planted > 200 - 5 * 14);
  CHECK(planted < 200 + 5 * 14);

  // Same seed reproduces the draw bit for bit.
  const auto res2 = corrupt_tv_oblivious(source, contaminant, 2, 0.1, 2000, 7);
  CHECK((res.corrupted.points() - res2.corrupted.points()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dimension deletion zeroes the informative rows") {
  // Two-atom design: 10% informative mass at x = b along the first axis.
  const double eps = 0.1;
  const double b = dimension_delete_atom(1.0, eps);
  const int n = 500;
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(n, 3);
  for (int i = 0; i < 50; ++i) {
    pts(i, 0) = b;
    pts(i, 2) = 2.0;  // response carried by the informative atoms
  }
  const auto joint = EmpiricalDist::uniform(std::move(pts));
  const auto res = adversary_dimension_delete(joint, eps);
  CHECK((res.corrupted.points().array() == 0.0).all());
  CHECK(res.receipt.achieved == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(res.receipt.affected == 50);
}

TEST_CASE("dimension deletion rejects overweight informative mass") {
  Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(100, 2);
  for (int i = 0; i < 60; ++i) pts(i, 0) = 1.0;
  const auto joint = EmpiricalDist::uniform(std::move(pts));
  CHECK_THROWS_AS(adversary_dimension_delete(joint, 0.1), BadEps);
}

TEST_CASE("informative atom scale matches the closed form") {
  CHECK(dimension_delete_atom(1.0, 0.5) ==
        doctest::Approx(std::sqrt(std::log(3.0))).epsilon(1e-12));
  CHECK(dimension_delete_atom(2.0, 0.1) ==
        doctest::Approx(2.0 * std::sqrt(std::log(11.0))).epsilon(1e-12));
}

TEST_CASE("strategy parsing round trips") {
  const auto sc = AdaptiveTvStrategy::parse("shift_cluster:1,0,5", 2);
  CHECK(sc.kind == AdaptiveTvStrategy::Kind::ShiftCluster);
  CHECK(sc.direction[0] == 1.0);
  CHECK(sc.magnitude == 5.0);

  const auto mp = AdaptiveTvStrategy::parse("mean_pull:2,3", 2);
  CHECK(mp.kind == AdaptiveTvStrategy::Kind::MeanPull);
  CHECK(mp.target[1] == 3.0);

  CHECK(AdaptiveTvStrategy::parse("tail_mimic", 4).kind ==
        AdaptiveTvStrategy::Kind::TailMimic);
  CHECK_THROWS_AS(AdaptiveTvStrategy::parse("nonsense", 2), UnknownStrategy);

  const auto us = W1Strategy::parse("uniform_shift:0,1", 2);
  CHECK(us.kind == W1Strategy::Kind::UniformShift);
  const auto tk = W1Strategy::parse("top_k:1,0,25", 2);
  CHECK(tk.kind == W1Strategy::Kind::TopK);
  CHECK(tk.k == 25);
  CHECK_THROWS_AS(W1Strategy::parse("warp", 2), UnknownStrategy);
}

TEST_CASE("corruption validates eps") {
  const auto clean = gaussian_sample(20, 2, 38);
  CHECK_THROWS_AS(
      corrupt_tv_adaptive(clean, -0.1, AdaptiveTvStrategy::tail_mimic(), 1), BadEps);
  CHECK_THROWS_AS(
      corrupt_tv_adaptive(clean, 1.0, AdaptiveTvStrategy::tail_mimic(), 1), BadEps);
}
