#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gpclass/dataset.hpp"
#include "gpclass/mcmc.hpp"

namespace gpclass {

struct MisclassReport {
  std::vector<int> indices;
  std::vector<ClassLabel> labels;
  Eigen::VectorXd rates;  // strictly inside (0,1)
};

// Rao-Blackwellized leave-one-out misclassification: for every retained
// sample, the untruncated full conditional of eta_i given the rest yields an
// analytic sign-error probability; rates average those over the trace.
MisclassReport loo_misclassification(const TraceSet& trace,
                                     const LabelledDataset& d);

}  // namespace gpclass
