#include "gpclass/gp.hpp"

#include <cmath>
#include <limits>

namespace gpclass {

std::string basis_name(BasisKind k) {
  switch (k) {
    case BasisKind::Constant: return "constant";
    case BasisKind::Linear: return "linear";
    case BasisKind::Quadratic: return "quadratic";
  }
  return "?";
}

BasisKind parse_basis(const std::string& text) {
  if (text == "constant") return BasisKind::Constant;
  if (text == "linear") return BasisKind::Linear;
  if (text == "quadratic") return BasisKind::Quadratic;
  throw UsageError("unknown mean basis '" + text + "'");
}

double nugget_for(Eigen::Index n, double nugget_scale) {
  return nugget_scale * static_cast<double>(n) *
         std::numeric_limits<double>::epsilon();
}

Eigen::VectorXd basis_vector(const Eigen::VectorXd& x, const MeanBasis& b) {
  if (x.size() != b.p) throw DimensionMismatch("basis_vector input");
  Eigen::VectorXd h(b.q());
  h[0] = 1.0;
  if (b.kind == BasisKind::Constant) return h;
  h.segment(1, b.p) = x;
  if (b.kind == BasisKind::Quadratic)
    h.segment(1 + b.p, b.p) = x.array().square().matrix();
  return h;
}

Eigen::MatrixXd basis_matrix(const Eigen::MatrixXd& X, const MeanBasis& b) {
  Eigen::MatrixXd H(X.rows(), b.q());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    H.row(i) = basis_vector(X.row(i).transpose(), b).transpose();
  return H;
}

namespace {

void check_delta(const Eigen::VectorXd& delta) {
  for (Eigen::Index k = 0; k < delta.size(); ++k)
    if (!(delta[k] > 0.0))
      throw NonPositiveLengthscale(static_cast<std::size_t>(k));
}

}  // namespace

double correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& delta) {
  if (x.size() != y.size() || x.size() != delta.size())
    throw DimensionMismatch("correlation inputs");
  check_delta(delta);
  double s = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double d = x[k] - y[k];
    s += d * d / delta[k];
  }
  return std::exp(-s);
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& delta) {
  check_delta(delta);
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index k = 0; k < X.cols(); ++k) {
    const auto col = X.col(k);
    S.noalias() +=
        (col.replicate(1, n) - col.transpose().replicate(n, 1)).array().square().matrix() /
        delta[k];
  }
  return (-S.array()).exp().matrix();
}

Eigen::MatrixXd cross_correlation(const Eigen::MatrixXd& Xs,
                                  const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& delta) {
  if (Xs.cols() != X.cols()) throw DimensionMismatch("cross_correlation inputs");
  check_delta(delta);
  const Eigen::Index m = Xs.rows(), n = X.rows();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, n);
  for (Eigen::Index k = 0; k < X.cols(); ++k) {
    S.noalias() += (Xs.col(k).replicate(1, n) -
                    X.col(k).transpose().replicate(m, 1))
                       .array()
                       .square()
                       .matrix() /
                   delta[k];
  }
  return (-S.array()).exp().matrix();
}

std::pair<Eigen::MatrixXd, double> cholesky_jittered(const Eigen::MatrixXd& A,
                                                     double base,
                                                     const std::string& where) {
  const Eigen::Index n = A.rows();
  const double floor =
      nugget_for(n) * std::max(1.0, A.diagonal().cwiseAbs().maxCoeff());
  double eps = base;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::MatrixXd M = A;
    M.diagonal().array() += eps;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() == Eigen::Success) {
      bool ok = true;
      Eigen::MatrixXd L = llt.matrixL();
      for (Eigen::Index i = 0; i < n; ++i)
        if (!(L(i, i) > 0.0) || !std::isfinite(L(i, i))) ok = false;
      if (ok) return {std::move(L), eps};
    }
    eps = (eps > 0.0) ? eps * 100.0 : floor;
  }
  throw NotPositiveDefinite(where);
}

GramFactor gram_factor(const Eigen::MatrixXd& X, const Eigen::VectorXd& delta,
                       double nugget_scale) {
  GramFactor gf;
  Eigen::MatrixXd C = correlation_matrix(X, delta);
  const double base = nugget_for(X.rows(), nugget_scale);
  auto [L, eps] = cholesky_jittered(C, base, "gram_factor");
  gf.nugget = eps;
  C.diagonal().array() += eps;
  gf.matrix = std::move(C);
  gf.log_det = 2.0 * L.diagonal().array().log().sum();
  const Eigen::Index n = X.rows();
  gf.precision = L.transpose()
                     .triangularView<Eigen::Upper>()
                     .solve(L.triangularView<Eigen::Lower>().solve(
                         Eigen::MatrixXd::Identity(n, n)));
  gf.precision = 0.5 * (gf.precision + gf.precision.transpose()).eval();
  gf.chol = std::move(L);
  return gf;
}

std::pair<Eigen::VectorXd, Eigen::MatrixXd> conditional_mvn(
    const Eigen::MatrixXd& X, const Eigen::VectorXd& eta,
    const Hyperparameters& th, const MeanBasis& b, const Eigen::MatrixXd& Xs,
    const GramFactor& gf) {
  if (eta.size() != X.rows()) throw DimensionMismatch("conditional_mvn eta");
  if (Xs.cols() != X.cols()) throw DimensionMismatch("conditional_mvn points");
  const Eigen::MatrixXd H = basis_matrix(X, b);
  const Eigen::MatrixXd Hs = basis_matrix(Xs, b);
  const Eigen::MatrixXd Cs = cross_correlation(Xs, X, th.delta);
  const Eigen::MatrixXd A = Cs * gf.precision;  // m x n kriging weights
  Eigen::VectorXd mean = Hs * th.beta + A * (eta - H * th.beta);
  Eigen::MatrixXd cov =
      th.sigma2 * (correlation_matrix(Xs, th.delta) - A * Cs.transpose());
  cov = 0.5 * (cov + cov.transpose()).eval();
  cov.diagonal().array() += th.sigma2 * nugget_for(Xs.rows());
  return {std::move(mean), std::move(cov)};
}

Eigen::VectorXd mvn_draw(const Eigen::VectorXd& mean,
                         const Eigen::MatrixXd& cov, Rng& rng) {
  auto [L, eps] = cholesky_jittered(cov, 0.0, "mvn_draw");
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return mean + L * z;
}

double log_mvn_density(const Eigen::VectorXd& eta, const Hyperparameters& th,
                       const Eigen::MatrixXd& H, const GramFactor& gf) {
  const Eigen::Index n = eta.size();
  if (H.rows() != n || th.beta.size() != H.cols())
    throw DimensionMismatch("log_mvn_density shapes");
  const Eigen::VectorXd r = eta - H * th.beta;
  const Eigen::VectorXd w = gf.chol.triangularView<Eigen::Lower>().solve(r);
  const double quad = w.squaredNorm() / th.sigma2;
  constexpr double kLog2Pi = 1.8378770664093454836;
  return -0.5 * (static_cast<double>(n) * (kLog2Pi + std::log(th.sigma2)) +
                 gf.log_det + quad);
}

}  // namespace gpclass
