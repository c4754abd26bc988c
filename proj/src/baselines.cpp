#include "gpclass/baselines.hpp"

#include <cmath>
#include <limits>

#include "gpclass/errors.hpp"

namespace gpclass {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

}  // namespace

LogisticModel fit_logistic(const LabelledDataset& d) {
  validate_dataset(d);
  const Eigen::Index n = d.n();
  const Eigen::Index q = d.p() + 1;

  Eigen::MatrixXd X(n, q);
  X.col(0).setOnes();
  X.rightCols(d.p()) = d.points;
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i)
    y(i) = d.labels[static_cast<std::size_t>(i)] == ClassLabel::L1 ? 1.0 : 0.0;

  LogisticModel m;
  m.coeffs = Eigen::VectorXd::Zero(q);
  constexpr int kMaxIter = 100;
  constexpr double kTol = 1e-8;
  constexpr double kMinWeight = 1e-10;

  for (int it = 0; it < kMaxIter; ++it) {
    Eigen::VectorXd lin = X * m.coeffs;
    Eigen::VectorXd prob(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      prob(i) = sigmoid(lin(i));
      w(i) = std::max(prob(i) * (1.0 - prob(i)), kMinWeight);
    }
    Eigen::MatrixXd A = X.transpose() * w.asDiagonal() * X;
    Eigen::VectorXd g = X.transpose() * (y - prob);
    Eigen::VectorXd step = A.ldlt().solve(g);
    m.coeffs += step;
    m.iterations = it + 1;
    if (step.cwiseAbs().maxCoeff() < kTol) {
      m.converged = true;
      break;
    }
  }

  if (!m.converged) {
    // Cap reached: flag separable data, where the likelihood has no finite
    // optimum and the final hyperplane splits the classes cleanly.
    Eigen::VectorXd lin = X * m.coeffs;
    bool separated = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double margin = y(i) > 0.5 ? lin(i) : -lin(i);
      if (!(margin > 0.0)) {
        separated = false;
        break;
      }
    }
    m.perfect_separation = separated;
  }
  return m;
}

Eigen::VectorXd logistic_prob_field(const LogisticModel& m,
                                    const PredictionGrid& grid) {
  if (grid.points.cols() + 1 != m.coeffs.size())
    throw DimensionMismatch("grid dimension does not match the logistic fit");
  Eigen::VectorXd out(grid.m());
  for (Eigen::Index j = 0; j < grid.m(); ++j) {
    double t = m.coeffs(0);
    for (Eigen::Index k = 0; k < grid.points.cols(); ++k)
      t += m.coeffs(k + 1) * grid.points(j, k);
    out(j) = sigmoid(t);
  }
  return out;
}

std::vector<ClassLabel> bernoulli_field_sample(const Eigen::VectorXd& probs,
                                               Rng& rng) {
  std::vector<ClassLabel> out(static_cast<std::size_t>(probs.size()));
  for (Eigen::Index j = 0; j < probs.size(); ++j) {
    const double pj = probs(j);
    if (!(pj >= 0.0 && pj <= 1.0))
      throw UsageError("Bernoulli probabilities must lie in [0,1]");
    out[static_cast<std::size_t>(j)] =
        rng.uniform() < pj ? ClassLabel::L1 : ClassLabel::L2;
  }
  return out;
}

Eigen::VectorXd average_bernoulli(const Eigen::VectorXd& probs, int count,
                                  Rng& rng) {
  if (count < 1) throw UsageError("average_bernoulli needs count >= 1");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(probs.size());
  for (int s = 0; s < count; ++s) {
    std::vector<ClassLabel> field = bernoulli_field_sample(probs, rng);
    for (Eigen::Index j = 0; j < probs.size(); ++j)
      if (field[static_cast<std::size_t>(j)] == ClassLabel::L1) acc(j) += 1.0;
  }
  return acc / static_cast<double>(count);
}

ClassLabel voronoi_classify(const LabelledDataset& d,
                            const Eigen::VectorXd& x) {
  if (d.n() == 0) throw DataError("voronoi_classify needs a non-empty dataset");
  if (x.size() != d.p())
    throw DimensionMismatch("query dimension does not match the dataset");
  Eigen::Index best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    const double d2 = (d.points.row(i).transpose() - x).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return d.labels[static_cast<std::size_t>(best)];
}

}  // namespace gpclass
