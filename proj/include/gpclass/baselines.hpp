#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gpclass/dataset.hpp"
#include "gpclass/predict.hpp"
#include "gpclass/rng.hpp"

namespace gpclass {

struct LogisticModel {
  Eigen::VectorXd coeffs;  // intercept followed by one slope per coordinate
  bool converged = false;
  int iterations = 0;
  bool perfect_separation = false;
};

// Plain maximum-likelihood logistic regression via iteratively reweighted
// least squares. L1 is encoded as outcome 1. Separable data runs to the
// iteration cap; the fitted direction is still usable and the condition is
// flagged rather than thrown.
LogisticModel fit_logistic(const LabelledDataset& d);

Eigen::VectorXd logistic_prob_field(const LogisticModel& m,
                                    const PredictionGrid& grid);

// Independent per-point Bernoulli labels. Deliberately ignores spatial
// correlation; this baseline exists to demonstrate that incoherence.
std::vector<ClassLabel> bernoulli_field_sample(const Eigen::VectorXd& probs,
                                               Rng& rng);

Eigen::VectorXd average_bernoulli(const Eigen::VectorXd& probs, int count,
                                  Rng& rng);

// Exact nearest-neighbor rule; identical to classifying by Voronoi cell of
// the training sites. Ties go to the lowest training index.
ClassLabel voronoi_classify(const LabelledDataset& d,
                            const Eigen::VectorXd& x);

}  // namespace gpclass
