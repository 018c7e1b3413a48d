#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"
#include "robustkit/common.hpp"
#include "robustkit/direction.hpp"
#include "robustkit/empirical_dist.hpp"
#include "robustkit/linalg.hpp"
#include "robustkit/orlicz.hpp"

using namespace robustkit;

TEST_CASE("empirical dist validates input") {
  Eigen::MatrixXd pts(2, 1);
  pts << 0.0, 1.0;
  Eigen::VectorXd w(2);
  w << 0.5, 0.5;
  CHECK_NOTHROW(EmpiricalDist(pts, w));

  Eigen::VectorXd bad = w;
  bad[0] = -0.1;
  CHECK_THROWS_AS(EmpiricalDist(pts, bad), Error);

  Eigen::VectorXd off = w;
  off[0] = 0.6;  // sums to 1.1
  CHECK_THROWS_AS(EmpiricalDist(pts, off), Error);

  Eigen::MatrixXd nan_pts = pts;
  nan_pts(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(EmpiricalDist(nan_pts, w), NonFinite);
}

TEST_CASE("tiny weights are dropped and renormalized") {
  Eigen::MatrixXd pts(3, 1);
  pts << 0.0, 1.0, 2.0;
  Eigen::VectorXd w(3);
  w << 0.5, 1e-16, 0.5 - 1e-16;
  EmpiricalDist p(pts, w);
  CHECK(p.n() == 2);
  CHECK(p.weights().sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weighted moments match hand computation") {
  // Mass 0.25 at (0,0), 0.75 at (2,4).
  Eigen::MatrixXd pts(2, 2);
  pts << 0.0, 0.0, 2.0, 4.0;
  Eigen::VectorXd w(2);
  w << 0.25, 0.75;
  EmpiricalDist p(pts, w);

  const Eigen::VectorXd mu = weighted_mean(p);
  CHECK(mu[0] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(mu[1] == doctest::Approx(3.0).epsilon(1e-12));

  // E[xx'] = 0.75 * [4, 8; 8, 16]
  const Eigen::MatrixXd m2 = weighted_second_moment(p);
  CHECK(m2(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(m2(0, 1) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(m2(1, 1) == doctest::Approx(12.0).epsilon(1e-12));

  // Cov = E[xx'] - mu mu'
  const Eigen::MatrixXd cov = weighted_covariance(p);
  CHECK(cov(0, 0) == doctest::Approx(3.0 - 2.25).epsilon(1e-12));
  CHECK(cov(0, 1) == doctest::Approx(6.0 - 4.5).epsilon(1e-12));
  CHECK(cov(1, 1) == doctest::Approx(12.0 - 9.0).epsilon(1e-12));
}

TEST_CASE("lex_sorted is invariant under row permutation") {
  auto rng = make_rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd pts(20, 3);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 3; ++j) pts(i, j) = gauss(rng);
  EmpiricalDist p = EmpiricalDist::uniform(pts);

  std::vector<int> perm(20);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd shuffled(20, 3);
  for (int i = 0; i < 20; ++i) shuffled.row(i) = pts.row(perm[i]);
  EmpiricalDist q = EmpiricalDist::uniform(shuffled);

  const EmpiricalDist a = p.lex_sorted();
  const EmpiricalDist b = q.lex_sorted();
  CHECK((a.points() - b.points()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.weights() - b.weights()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("projection onto a direction") {
  Eigen::MatrixXd pts(2, 2);
  pts << 1.0, 2.0, 3.0, 4.0;
  EmpiricalDist p = EmpiricalDist::uniform(pts);
  Eigen::VectorXd v(2);
  v << 1.0, 0.0;
  const Eigen::VectorXd proj = p.project(v);
  CHECK(proj[0] == 1.0);
  CHECK(proj[1] == 3.0);
  const EmpiricalDist pd = p.project_dist(v);
  CHECK(pd.dim() == 1);
  CHECK(pd.n() == 2);
}

TEST_CASE("csv round trip") {
  Eigen::MatrixXd pts(3, 2);
  pts << 0.5, -1.0, 2.25, 0.0, -3.5, 4.0;
  Eigen::VectorXd w(3);
  w << 0.2, 0.3, 0.5;
  EmpiricalDist p(pts, w);
  const std::string path = std::filesystem::temp_directory_path() / "rk_core_rt.csv";
  save_csv(p, path, false, true);
  const auto loaded = load_csv(path);
  CHECK(loaded.dist.n() == 3);
  CHECK(loaded.dist.dim() == 2);
  CHECK((loaded.dist.points() - pts).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((loaded.dist.weights() - w).cwiseAbs().maxCoeff() < 1e-12);
  std::filesystem::remove(path);
}

TEST_CASE("splitmix64 seed splitting is deterministic and spread out") {
  CHECK(split_seed(1, 2, 3) == split_seed(1, 2, 3));
  CHECK(split_seed(1, 2, 3) != split_seed(1, 2, 4));
  CHECK(split_seed(1, 2, 3) != split_seed(1, 3, 3));
  CHECK(split_seed(1, 2, 3) != split_seed(2, 2, 3));
}

TEST_CASE("orlicz function shapes") {
  const auto p2 = OrliczFunction::power(2);
  CHECK(p2.psi(0.0) == 0.0);
  CHECK(p2.psi(3.0) == doctest::Approx(9.0));
  CHECK(p2.psi_inv(9.0) == doctest::Approx(3.0));

  const auto ex = OrliczFunction::exponential();
  CHECK(ex.psi(0.0) == 0.0);
  CHECK(ex.psi(1.0) == doctest::Approx(std::exp(1.0) - 1.0));
  CHECK(ex.psi_inv(ex.psi(2.5)) == doctest::Approx(2.5));

  const auto sg = OrliczFunction::subgaussian();
  CHECK(sg.psi(0.0) == 0.0);
  CHECK(sg.psi_inv(sg.psi(1.7)) == doctest::Approx(1.7));

  CHECK_THROWS_AS(OrliczFunction::power(0.5), Error);
}

TEST_CASE("orlicz norm of the uniform {0, 2} sample under power(2)") {
  // E psi(|f|/t) = 0.5 * (2/t)^2 = 2/t^2, equal to 1 at t = sqrt(2).
  const auto p = EmpiricalDist::uniform_1d({0.0, 2.0});
  const double norm = orlicz_norm(p, OrliczFunction::power(2));
  CHECK(norm == doctest::Approx(std::sqrt(2.0)).epsilon(1e-7));
}

TEST_CASE("orlicz norm is positively homogeneous") {
  auto rng = make_rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd f(40), w(40);
  for (int i = 0; i < 40; ++i) {
    f[i] = gauss(rng);
    w[i] = 1.0 / 40;
  }
  for (const auto& psi : {OrliczFunction::power(2), OrliczFunction::power(4),
                          OrliczFunction::exponential(), OrliczFunction::subgaussian()}) {
    const double base = orlicz_norm(f, w, psi);
    const double scaled = orlicz_norm((3.5 * f).eval(), w, psi);
    CHECK(scaled == doctest::Approx(3.5 * base).epsilon(1e-6));
  }
}

TEST_CASE("orlicz norm of zero is zero and scales monotonically") {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(5);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(5, 0.2);
  CHECK(orlicz_norm(f, w, OrliczFunction::power(2)) == 0.0);
}

TEST_CASE("top eigenpair on fixed matrices") {
  Eigen::MatrixXd d(2, 2);
  d << 3.0, 0.0, 0.0, 1.0;
  const auto top = top_eigenpair(d);
  CHECK(top.value == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(std::abs(top.vector[0]) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(top.vector[0] > 0.0);  // canonical sign

  Eigen::MatrixXd m(2, 2);
  m << 2.0, 1.0, 1.0, 2.0;
  const auto t2 = top_eigenpair(m);
  CHECK(t2.value == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(t2.vector[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
  CHECK(t2.vector[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
}

TEST_CASE("top eigenpair agrees with a dense solver on random matrices") {
  auto rng = make_rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int d = 2 + static_cast<int>(splitmix64(trial) % 6);
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = gauss(rng);
    Eigen::MatrixXd sym = 0.5 * (a + a.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const double reference = es.eigenvalues().maxCoeff();

    const auto top = top_eigenpair(sym, split_seed(11, trial));
    CHECK(top.value == doctest::Approx(reference).epsilon(1e-8));
    // Residual certificate: ||Mv - lambda v|| small.
    const double resid = (sym * top.vector - top.value * top.vector).norm();
    CHECK(resid <= 1e-8 * std::max(1.0, std::abs(top.value)));
  }
}

TEST_CASE("spectral norm handles negative extremes") {
  Eigen::MatrixXd m(2, 2);
  m << -5.0, 0.0, 0.0, 2.0;
  CHECK(spectral_norm_sym(m) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("top_k eigenpairs are orthogonal and ordered") {
  auto rng = make_rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(5, 8);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 8; ++j) a(i, j) = gauss(rng);
  Eigen::MatrixXd psd = a.transpose() * a;  // PSD, rank 5

  const auto pairs = top_k_eigenpairs(psd, 3, 99);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0].value >= pairs[1].value);
  CHECK(pairs[1].value >= pairs[2].value);
  CHECK(std::abs(pairs[0].vector.dot(pairs[1].vector)) < 1e-7);
  CHECK(std::abs(pairs[0].vector.dot(pairs[2].vector)) < 1e-7);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(psd);
  const auto ev = es.eigenvalues();
  CHECK(pairs[0].value == doctest::Approx(ev[7]).epsilon(1e-8));
  CHECK(pairs[1].value == doctest::Approx(ev[6]).epsilon(1e-8));
}

TEST_CASE("directions are unit length and include axes") {
  auto rng = make_rng(3);
  for (int i = 0; i < 10; ++i)
    CHECK(random_unit(4, rng).norm() == doctest::Approx(1.0).epsilon(1e-12));

  const auto dirs = sphere_sample_with_axes(3, 8, 5);
  CHECK(dirs.size() == 8 + 3);
  int axes_found = 0;
  for (const auto& v : dirs) {
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    for (int c = 0; c < 3; ++c)
      if ((v - Eigen::VectorXd::Unit(3, c)).norm() < 1e-12) ++axes_found;
  }
  CHECK(axes_found == 3);
}

TEST_CASE("direction construction rejects non-unit vectors") {
  Eigen::VectorXd v(2);
  v << 3.0, 4.0;
  CHECK_THROWS_AS(Direction{v}, Error);
  const Direction d = Direction::normalized(v);
  CHECK(d.v()[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(d.v()[1] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("projection families evaluate as advertised") {
  Eigen::MatrixXd pts(2, 2);
  pts << 1.0, 2.0, -1.0, 3.0;
  EmpiricalDist p = EmpiricalDist::uniform(pts);

  Eigen::VectorXd v(2);
  v << 1.0, 0.0;
  auto lin = ProjectionFamily::linear_fixed({v});
  REQUIRE(lin.size() == 1);
  const Eigen::VectorXd vals = lin.evaluate(p, 0);
  CHECK(vals[0] == 1.0);
  CHECK(vals[1] == -1.0);

  const auto qd = ProjectionFamily::quad_diff(2, 4, 17);
  CHECK(qd.size() > 0);
  for (int i = 0; i < qd.size(); ++i) {
    const Eigen::VectorXd f = qd.evaluate(p, i);
    CHECK(f.size() == 2);
    CHECK(std::isfinite(f[0]));
    CHECK(std::isfinite(f[1]));
  }
}
