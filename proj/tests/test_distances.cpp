#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "robustkit/distances.hpp"
#include "robustkit/empirical_dist.hpp"

using namespace robustkit;

namespace {

EmpiricalDist rand_dist(std::mt19937_64& rng, int max_n, int d) {
  std::uniform_int_distribution<int> nd(1, max_n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = nd(rng);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) pts(i, j) = gauss(rng);
  return EmpiricalDist::uniform(std::move(pts));
}

}  // namespace

TEST_CASE("tv on a fixed two-atom example") {
  // p = 0.3@0 + 0.7@1, q = 0.6@0 + 0.4@2. Excess mass of p over q: 0.7 at 1.
  const auto p = EmpiricalDist::weighted_1d({0.0, 1.0}, {0.3, 0.7});
  const auto q = EmpiricalDist::weighted_1d({0.0, 2.0}, {0.6, 0.4});
  const auto rep = tv_discrete(p, q);
  CHECK(rep.value == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(reevaluate_witness(rep.witness, p, q) == doctest::Approx(rep.value).epsilon(1e-12));
}

TEST_CASE("tv basic properties") {
  auto rng = make_rng(101);
  for (int t = 0; t < 30; ++t) {
    const auto p = rand_dist(rng, 12, 2);
    const auto q = rand_dist(rng, 12, 2);
    const double pq = tv_discrete(p, q).value;
    const double qp = tv_discrete(q, p).value;
    CHECK(pq == doctest::Approx(qp).epsilon(1e-12));
    CHECK(pq >= 0.0);
    CHECK(pq <= 1.0 + 1e-12);
    CHECK(tv_discrete(p, p).value == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("tv merges nearby atoms") {
  const auto p = EmpiricalDist::weighted_1d({0.0}, {1.0});
  const auto q = EmpiricalDist::weighted_1d({1e-13}, {1.0});
  CHECK(tv_discrete(p, q).value == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("ks on the uniform supports example") {
  // F gap maximal at 1: 1 vs 2/3.
  const auto p = EmpiricalDist::uniform_1d({0.0, 1.0});
  const auto q = EmpiricalDist::uniform_1d({0.0, 1.0, 2.0});
  const auto rep = ks_1d(p, q);
  CHECK(rep.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(reevaluate_witness(rep.witness, p, q) == doctest::Approx(rep.value).epsilon(1e-9));
}

TEST_CASE("ks is bounded by tv") {
  auto rng = make_rng(102);
  for (int t = 0; t < 40; ++t) {
    const auto p = rand_dist(rng, 12, 1);
    const auto q = rand_dist(rng, 12, 1);
    CHECK(ks_1d(p, q).value <= tv_discrete(p, q).value + 1e-12);
  }
}

TEST_CASE("w1 on the split-to-center example") {
  // Both halves travel distance 1.
  const auto p = EmpiricalDist::uniform_1d({0.0, 2.0});
  const auto q = EmpiricalDist::uniform_1d({1.0});
  const auto rep = w1_1d(p, q);
  CHECK(rep.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(reevaluate_witness(rep.witness, p, q) == doctest::Approx(rep.value).epsilon(1e-9));
}

TEST_CASE("w1 quantile coupling matches a hand-worked weighted case") {
  // p = 0.25@0 + 0.75@4, q = 0.5@1 + 0.5@3.
  // Quantile coupling: (0->1, .25), (4->1, .25), (4->3, .5); cost 1.5.
  const auto p = EmpiricalDist::weighted_1d({0.0, 4.0}, {0.25, 0.75});
  const auto q = EmpiricalDist::weighted_1d({1.0, 3.0}, {0.5, 0.5});
  const auto rep = w1_1d(p, q);
  CHECK(rep.value == doctest::Approx(1.5).epsilon(1e-12));
  double plan_mass = rep.witness.plan_m.sum();
  CHECK(plan_mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("w1 metric properties") {
  auto rng = make_rng(103);
  for (int t = 0; t < 30; ++t) {
    const auto p = rand_dist(rng, 10, 1);
    const auto q = rand_dist(rng, 10, 1);
    const auto r = rand_dist(rng, 10, 1);
    const double pq = w1_1d(p, q).value;
    CHECK(pq == doctest::Approx(w1_1d(q, p).value).epsilon(1e-9));
    CHECK(w1_1d(p, p).value == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pq <= w1_1d(p, r).value + w1_1d(r, q).value + 1e-9);
  }
}

TEST_CASE("w1 translation covariance") {
  auto rng = make_rng(104);
  for (int t = 0; t < 20; ++t) {
    const auto p = rand_dist(rng, 10, 1);
    const auto q = rand_dist(rng, 10, 1);
    Eigen::MatrixXd shifted_p = p.points().array() + 5.0;
    Eigen::MatrixXd shifted_q = q.points().array() + 5.0;
    const double base = w1_1d(p, q).value;
    const double moved = w1_1d(EmpiricalDist(shifted_p, p.weights()),
                               EmpiricalDist(shifted_q, q.weights()))
                             .value;
    CHECK(moved == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("weakened tv with a linear family reduces to projected ks") {
  auto rng = make_rng(105);
  for (int t = 0; t < 15; ++t) {
    const auto p = rand_dist(rng, 10, 2);
    const auto q = rand_dist(rng, 10, 2);
    Eigen::VectorXd v(2);
    v << 1.0, 0.0;
    const auto fam = ProjectionFamily::linear_fixed({v});
    const double wt = tvtilde(p, q, fam).value;
    const double axis_ks =
        ks_1d(p.project_dist(v), q.project_dist(v)).value;
    // Hill climbing can only improve on the family's best direction.
    CHECK(wt >= axis_ks - 1e-12);
    CHECK(wt <= tv_discrete(p, q).value + 1e-9);
  }
}

TEST_CASE("weakened tv witness reevaluates to the reported value") {
  auto rng = make_rng(106);
  for (int t = 0; t < 10; ++t) {
    const auto p = rand_dist(rng, 14, 3);
    const auto q = rand_dist(rng, 14, 3);
    const auto fam = ProjectionFamily::quad_diff(3, 16, split_seed(106, t));
    const auto rep = tvtilde(p, q, fam);
    CHECK(reevaluate_witness(rep.witness, p, q) ==
          doctest::Approx(rep.value).epsilon(1e-9));
  }
}

TEST_CASE("weakened w1 on symmetric spread vs point mass") {
  // Means agree; the ReLU gap peaks at the origin: E_p relu(X) = 0.5.
  const auto p = EmpiricalDist::uniform_1d({-1.0, 1.0});
  const auto q = EmpiricalDist::uniform_1d({0.0});
  const auto rep = w1tilde(p, q, 3, 16);
  CHECK(rep.value == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("weakened w1 on separated point masses is the mean gap") {
  const auto p = EmpiricalDist::uniform_1d({0.0});
  const auto q = EmpiricalDist::uniform_1d({2.0});
  const auto rep = w1tilde(p, q, 3, 16);
  CHECK(rep.value == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rep.witness.linear);
}

TEST_CASE("weakened w1 never exceeds projected w1") {
  auto rng = make_rng(107);
  for (int t = 0; t < 20; ++t) {
    const auto p = rand_dist(rng, 10, 2);
    const auto q = rand_dist(rng, 10, 2);
    const auto rep = w1tilde(p, q, split_seed(107, t), 32);
    CHECK(reevaluate_witness(rep.witness, p, q) ==
          doctest::Approx(rep.value).epsilon(1e-9));
    // Along the witness direction the weakened value is at most the full
    // 1-d transport cost.
    if (rep.witness.v.size() > 0) {
      const double full =
          w1_1d(p.project_dist(rep.witness.v), q.project_dist(rep.witness.v)).value;
      CHECK(rep.value <= full + 1e-9);
    }
  }
}

TEST_CASE("distances reject dimension mismatches") {
  const auto p1 = EmpiricalDist::uniform_1d({0.0});
  Eigen::MatrixXd pts(1, 2);
  pts << 0.0, 0.0;
  const auto p2 = EmpiricalDist::uniform(pts);
  CHECK_THROWS_AS(tv_discrete(p1, p2), DimensionMismatch);
  CHECK_THROWS_AS(ks_1d(p2, p2), DimensionMismatch);
  CHECK_THROWS_AS(w1_1d(p2, p2), DimensionMismatch);
}
