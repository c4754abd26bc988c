#include <cmath>
#include <limits>
#include <utility>

#include "doctest.h"
#include "gpclass/errors.hpp"
#include "gpclass/gp.hpp"
#include "gpclass/rng.hpp"

using namespace gpclass;

namespace {

Eigen::MatrixXd random_points(Eigen::Index n, Eigen::Index p, Rng& rng) {
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index i = 0; i < X.size(); ++i)
    X.data()[i] = 6.0 * rng.uniform() - 3.0;
  return X;
}

Eigen::VectorXd random_delta(Eigen::Index p, Rng& rng) {
  Eigen::VectorXd d(p);
  for (Eigen::Index k = 0; k < p; ++k) d[k] = 0.3 + 2.0 * rng.uniform();
  return d;
}

}  // namespace

TEST_SUITE("gp") {

TEST_CASE("basis dimensions and names") {
  CHECK(MeanBasis{BasisKind::Constant, 3}.q() == 1);
  CHECK(MeanBasis{BasisKind::Linear, 3}.q() == 4);
  CHECK(MeanBasis{BasisKind::Quadratic, 3}.q() == 7);
  CHECK(basis_name(BasisKind::Constant) == "constant");
  CHECK(basis_name(BasisKind::Linear) == "linear");
  CHECK(basis_name(BasisKind::Quadratic) == "quadratic");
  for (const auto k :
       {BasisKind::Constant, BasisKind::Linear, BasisKind::Quadratic})
    CHECK(parse_basis(basis_name(k)) == k);
  CHECK_THROWS_AS(parse_basis("cubic"), UsageError);
}

TEST_CASE("basis_vector layout") {
  Eigen::VectorXd x(2);
  x << 2.0, 3.0;
  const Eigen::VectorXd hc = basis_vector(x, MeanBasis{BasisKind::Constant, 2});
  REQUIRE(hc.size() == 1);
  CHECK(hc[0] == 1.0);
  const Eigen::VectorXd hl = basis_vector(x, MeanBasis{BasisKind::Linear, 2});
  REQUIRE(hl.size() == 3);
  CHECK(hl[0] == 1.0);
  CHECK(hl[1] == 2.0);
  CHECK(hl[2] == 3.0);
  const Eigen::VectorXd hq =
      basis_vector(x, MeanBasis{BasisKind::Quadratic, 2});
  REQUIRE(hq.size() == 5);
  CHECK(hq[3] == 4.0);
  CHECK(hq[4] == 9.0);
  CHECK_THROWS_AS(basis_vector(x, MeanBasis{BasisKind::Linear, 3}),
                  DimensionMismatch);
}

TEST_CASE("basis_matrix stacks basis vectors") {
  Rng rng(1);
  const Eigen::MatrixXd X = random_points(5, 3, rng);
  const MeanBasis b{BasisKind::Quadratic, 3};
  const Eigen::MatrixXd H = basis_matrix(X, b);
  REQUIRE(H.rows() == 5);
  REQUIRE(H.cols() == b.q());
  for (Eigen::Index i = 0; i < 5; ++i) {
    const Eigen::VectorXd h = basis_vector(X.row(i).transpose(), b);
    CHECK((H.row(i).transpose() - h).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("correlation hand values and guards") {
  Eigen::VectorXd x(2), y(2), delta(2);
  x << 0.0, 0.0;
  y << 1.0, 2.0;
  delta << 1.0, 4.0;
  CHECK(correlation(x, y, delta) == std::exp(-2.0));
  CHECK(correlation(x, x, delta) == 1.0);

  Eigen::VectorXd bad(2);
  bad << 1.0, 0.0;
  CHECK_THROWS_AS(correlation(x, y, bad), NonPositiveLengthscale);
  Eigen::VectorXd shorter(1);
  shorter << 1.0;
  CHECK_THROWS_AS(correlation(x, y, shorter), DimensionMismatch);
}

TEST_CASE("correlation_matrix agrees with pairwise correlation") {
  Rng rng(12);
  const Eigen::MatrixXd X = random_points(6, 2, rng);
  const Eigen::VectorXd delta = random_delta(2, rng);
  const Eigen::MatrixXd C = correlation_matrix(X, delta);
  REQUIRE(C.rows() == 6);
  REQUIRE(C.cols() == 6);
  for (Eigen::Index i = 0; i < 6; ++i) {
    CHECK(C(i, i) == 1.0);
    for (Eigen::Index j = 0; j < 6; ++j) {
      const double want =
          correlation(X.row(i).transpose(), X.row(j).transpose(), delta);
      CHECK(std::abs(C(i, j) - want) < 1e-13);
      CHECK(C(i, j) == C(j, i));
    }
  }
}

TEST_CASE("cross_correlation agrees with pairwise correlation") {
  Rng rng(13);
  const Eigen::MatrixXd X = random_points(5, 3, rng);
  const Eigen::MatrixXd Xs = random_points(4, 3, rng);
  const Eigen::VectorXd delta = random_delta(3, rng);
  const Eigen::MatrixXd Cs = cross_correlation(Xs, X, delta);
  REQUIRE(Cs.rows() == 4);
  REQUIRE(Cs.cols() == 5);
  for (Eigen::Index i = 0; i < 4; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) {
      const double want =
          correlation(Xs.row(i).transpose(), X.row(j).transpose(), delta);
      CHECK(std::abs(Cs(i, j) - want) < 1e-13);
    }
  Eigen::MatrixXd wrong(2, 2);
  wrong.setZero();
  CHECK_THROWS_AS(cross_correlation(wrong, X, delta), DimensionMismatch);
}

TEST_CASE("nugget_for formula") {
  const double eps = std::numeric_limits<double>::epsilon();
  CHECK(nugget_for(3) == 1e6 * 3.0 * eps);
  CHECK(nugget_for(2, 5.0) == 5.0 * 2.0 * eps);
  CHECK(nugget_for(0) == 0.0);
}

TEST_CASE("cholesky_jittered without escalation") {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(4, 4);
  const auto [L, eps] = cholesky_jittered(A, 0.0, "test");
  CHECK(eps == 0.0);
  CHECK((L - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cholesky_jittered escalates once by a factor of 100") {
  // eigenvalues {3 - 1e-7, -1e-7, -1e-7}: first attempt at 1e-8 fails,
  // the x100 escalation to 1e-6 succeeds
  Eigen::MatrixXd A = Eigen::MatrixXd::Ones(3, 3);
  A.diagonal().array() -= 1e-7;
  const double base = 1e-8;
  const auto [L, eps] = cholesky_jittered(A, base, "test");
  CHECK(eps == base * 100.0);
  Eigen::MatrixXd R = A;
  R.diagonal().array() += eps;
  CHECK((L * L.transpose() - R).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cholesky_jittered gives up on an indefinite matrix") {
  Eigen::MatrixXd A(2, 2);
  A << 1.0, 2.0, 2.0, 1.0;  // eigenvalues {3, -1}
  CHECK_THROWS_AS(cholesky_jittered(A, 0.0, "test"), NotPositiveDefinite);
}

TEST_CASE("gram_factor produces a consistent factorization") {
  Rng rng(21);
  const Eigen::MatrixXd X = random_points(5, 2, rng);
  const Eigen::VectorXd delta = random_delta(2, rng);
  const GramFactor gf = gram_factor(X, delta);

  CHECK(gf.nugget == nugget_for(5));
  Eigen::MatrixXd want = correlation_matrix(X, delta);
  want.diagonal().array() += gf.nugget;
  CHECK((gf.matrix - want).cwiseAbs().maxCoeff() == 0.0);

  CHECK((gf.precision * gf.matrix - Eigen::MatrixXd::Identity(5, 5))
            .cwiseAbs()
            .maxCoeff() < 1e-8);
  CHECK((gf.chol * gf.chol.transpose() - gf.matrix).cwiseAbs().maxCoeff() <
        1e-13);
  CHECK(gf.log_det ==
        doctest::Approx(std::log(gf.matrix.determinant())).epsilon(1e-9));
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j)
      CHECK(gf.precision(i, j) == gf.precision(j, i));
}

TEST_CASE("conditional_mvn matches a naive dense computation") {
  Rng rng(31);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.raw() % 6);
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.raw() % 4);
    const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng.raw() % 3);
    const Eigen::MatrixXd X = random_points(n, p, rng);
    const Eigen::MatrixXd Xs = random_points(m, p, rng);
    const MeanBasis b{BasisKind::Linear, static_cast<int>(p)};

    Hyperparameters th;
    th.delta = random_delta(p, rng);
    th.sigma2 = 0.5 + 2.0 * rng.uniform();
    th.beta.resize(b.q());
    for (Eigen::Index j = 0; j < th.beta.size(); ++j)
      th.beta[j] = rng.normal();

    Eigen::VectorXd eta(n);
    for (Eigen::Index i = 0; i < n; ++i) eta[i] = rng.normal();

    const GramFactor gf = gram_factor(X, th.delta);
    const auto [mean, cov] = conditional_mvn(X, eta, th, b, Xs, gf);

    // naive reference with an independent dense solve
    const Eigen::MatrixXd H = basis_matrix(X, b);
    const Eigen::MatrixXd Hs = basis_matrix(Xs, b);
    const Eigen::MatrixXd Cs = cross_correlation(Xs, X, th.delta);
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(gf.matrix);
    const Eigen::VectorXd ref_mean =
        Hs * th.beta + Cs * lu.solve(eta - H * th.beta);
    Eigen::MatrixXd ref_cov =
        th.sigma2 *
        (correlation_matrix(Xs, th.delta) - Cs * lu.solve(Cs.transpose()));
    ref_cov = 0.5 * (ref_cov + ref_cov.transpose()).eval();
    ref_cov.diagonal().array() += th.sigma2 * nugget_for(m);

    CHECK((mean - ref_mean).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((cov - ref_cov).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("conditional_mvn reproduces the data at the training points") {
  Rng rng(44);
  const Eigen::MatrixXd X = random_points(6, 2, rng);
  const MeanBasis b{BasisKind::Constant, 2};
  Hyperparameters th;
  th.delta = random_delta(2, rng);
  th.sigma2 = 1.3;
  th.beta = Eigen::VectorXd::Constant(1, 0.4);
  Eigen::VectorXd eta(6);
  for (Eigen::Index i = 0; i < 6; ++i) eta[i] = rng.normal();
  const GramFactor gf = gram_factor(X, th.delta);
  const auto [mean, cov] = conditional_mvn(X, eta, th, b, X, gf);
  // the nugget keeps this from being exact interpolation; stay loose
  CHECK((mean - eta).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(cov.cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("conditional_mvn shape guards") {
  Rng rng(3);
  const Eigen::MatrixXd X = random_points(4, 2, rng);
  const MeanBasis b{BasisKind::Constant, 2};
  Hyperparameters th;
  th.delta = random_delta(2, rng);
  th.beta = Eigen::VectorXd::Zero(1);
  const GramFactor gf = gram_factor(X, th.delta);
  Eigen::VectorXd eta(3);  // wrong length
  eta.setZero();
  CHECK_THROWS_AS(conditional_mvn(X, eta, th, b, X, gf), DimensionMismatch);
  Eigen::VectorXd ok(4);
  ok.setZero();
  Eigen::MatrixXd wrong(2, 3);
  wrong.setZero();
  CHECK_THROWS_AS(conditional_mvn(X, ok, th, b, wrong, gf), DimensionMismatch);
}

TEST_CASE("mvn_draw matches its target distribution") {
  Eigen::VectorXd mean(2);
  mean << 1.0, -2.0;
  Eigen::MatrixXd cov(2, 2);
  cov << 2.0, 0.6, 0.6, 0.5;
  Rng rng(555);
  const int n = 200000;
  Eigen::Vector2d s = Eigen::Vector2d::Zero();
  Eigen::Matrix2d s2 = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd x = mvn_draw(mean, cov, rng);
    s += x;
    s2 += x * x.transpose();
  }
  const Eigen::Vector2d m = s / n;
  const Eigen::Matrix2d v = s2 / n - m * m.transpose();
  CHECK(std::abs(m[0] - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(m[1] + 2.0) < 5.0 * std::sqrt(0.5 / n));
  CHECK(std::abs(v(0, 0) - 2.0) < 0.05);
  CHECK(std::abs(v(1, 1) - 0.5) < 0.02);
  CHECK(std::abs(v(0, 1) - 0.6) < 0.03);

  Rng a(8), b(8);
  const Eigen::VectorXd da = mvn_draw(mean, cov, a);
  const Eigen::VectorXd db = mvn_draw(mean, cov, b);
  CHECK((da - db).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("log_mvn_density matches a naive dense evaluation") {
  Rng rng(66);
  const Eigen::MatrixXd X = random_points(6, 2, rng);
  const MeanBasis b{BasisKind::Linear, 2};
  Hyperparameters th;
  th.delta = random_delta(2, rng);
  th.sigma2 = 0.9;
  th.beta.resize(b.q());
  for (Eigen::Index j = 0; j < th.beta.size(); ++j) th.beta[j] = rng.normal();
  Eigen::VectorXd eta(6);
  for (Eigen::Index i = 0; i < 6; ++i) eta[i] = rng.normal();
  const Eigen::MatrixXd H = basis_matrix(X, b);
  const GramFactor gf = gram_factor(X, th.delta);

  const double got = log_mvn_density(eta, th, H, gf);
  const Eigen::VectorXd r = eta - H * th.beta;
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(gf.matrix);
  const double quad = r.dot(lu.solve(r)) / th.sigma2;
  constexpr double kTwoPi = 6.283185307179586477;
  const double want =
      -0.5 * (6.0 * (std::log(kTwoPi) + std::log(th.sigma2)) +
              std::log(gf.matrix.determinant()) + quad);
  CHECK(got == doctest::Approx(want).epsilon(1e-9));

  Eigen::VectorXd wrong(5);
  wrong.setZero();
  CHECK_THROWS_AS(log_mvn_density(wrong, th, H, gf), DimensionMismatch);
}

}  // TEST_SUITE
