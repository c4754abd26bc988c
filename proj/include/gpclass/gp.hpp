#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>

#include "gpclass/errors.hpp"
#include "gpclass/rng.hpp"

namespace gpclass {

enum class BasisKind { Constant, Linear, Quadratic };

struct MeanBasis {
  BasisKind kind = BasisKind::Linear;
  int p = 1;

  int q() const {
    switch (kind) {
      case BasisKind::Constant: return 1;
      case BasisKind::Linear: return 1 + p;
      case BasisKind::Quadratic: return 1 + 2 * p;
    }
    return 0;
  }
};

std::string basis_name(BasisKind k);
BasisKind parse_basis(const std::string& text);

struct Hyperparameters {
  Eigen::VectorXd beta;
  double sigma2 = 1.0;
  Eigen::VectorXd delta;
};

// Default diagonal-jitter scale: eps = nugget_scale * n * machine epsilon.
inline constexpr double kDefaultNuggetScale = 1e6;

double nugget_for(Eigen::Index n, double nugget_scale = kDefaultNuggetScale);

struct GramFactor {
  Eigen::MatrixXd matrix;     // C + eps I
  Eigen::MatrixXd chol;       // lower triangular L, matrix = L L^T
  Eigen::MatrixXd precision;  // (C + eps I)^{-1}
  double log_det = 0.0;
  double nugget = 0.0;
};

Eigen::VectorXd basis_vector(const Eigen::VectorXd& x, const MeanBasis& b);
Eigen::MatrixXd basis_matrix(const Eigen::MatrixXd& X, const MeanBasis& b);

double correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                   const Eigen::VectorXd& delta);

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& X,
                                   const Eigen::VectorXd& delta);
Eigen::MatrixXd cross_correlation(const Eigen::MatrixXd& Xs,
                                  const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& delta);

// Cholesky with one x100 jitter escalation; returns (L, applied jitter).
// `base` is added to the diagonal before the first attempt.
std::pair<Eigen::MatrixXd, double> cholesky_jittered(const Eigen::MatrixXd& A,
                                                     double base,
                                                     const std::string& where);

GramFactor gram_factor(const Eigen::MatrixXd& X, const Eigen::VectorXd& delta,
                       double nugget_scale = kDefaultNuggetScale);

// Conditional MVN of the latent process at Xs given values eta at X.
// cov already carries its diagonal nugget.
std::pair<Eigen::VectorXd, Eigen::MatrixXd> conditional_mvn(
    const Eigen::MatrixXd& X, const Eigen::VectorXd& eta,
    const Hyperparameters& th, const MeanBasis& b, const Eigen::MatrixXd& Xs,
    const GramFactor& gf);

Eigen::VectorXd mvn_draw(const Eigen::VectorXd& mean,
                         const Eigen::MatrixXd& cov, Rng& rng);

double log_mvn_density(const Eigen::VectorXd& eta, const Hyperparameters& th,
                       const Eigen::MatrixXd& H, const GramFactor& gf);

}  // namespace gpclass
