#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "gpclass/dataset.hpp"
#include "gpclass/gp.hpp"
#include "gpclass/rng.hpp"

namespace gpclass {

struct PriorSpec {
  Eigen::VectorXd beta_mean;   // length q
  Eigen::VectorXd beta_var;    // length q, positive
  double sigma2_shape = 3.0;   // inverse-gamma
  double sigma2_scale = 4.0;
  double delta_shape = 3.0;    // inverse-gamma, per axis scale below
  Eigen::VectorXd delta_scale;
  bool tight_intercept = false;
};

void validate_prior(const PriorSpec& prior, int q, int p);

// Priors calibrated from the data ranges: delta_k mean (range_k/2)^2,
// sigma2 mean 2, loose normal coefficients with an optionally tight
// intercept for centered data.
PriorSpec default_prior(const LabelledDataset& d, const MeanBasis& basis,
                        bool centered);

struct LatentState {
  Eigen::VectorXd eta;
};

struct McmcConfig {
  int iterations = 10000;
  int burnin = 5000;
  int thin = 5;
  std::uint64_t seed = 0;
  int gibbs_sweeps_per_iter = 1;
  double mh_step_sigma2 = 0.5;
  double mh_step_delta = 0.5;
  bool adapt = true;
};

void validate_config(const McmcConfig& cfg);

struct TraceSample {
  int iter = 0;
  Eigen::VectorXd eta;
  Eigen::VectorXd beta;
  double sigma2 = 1.0;
  Eigen::VectorXd delta;
};

struct TraceSet {
  std::vector<TraceSample> samples;
  double accept_sigma2 = 0.0;          // post-burnin acceptance rates
  Eigen::VectorXd accept_delta;        // per axis
  McmcConfig config;
  BasisKind basis = BasisKind::Linear;
  PriorSpec prior;
};

std::pair<LatentState, Hyperparameters> init_state(
    const LabelledDataset& d, const MeanBasis& basis, const PriorSpec& prior,
    Rng& rng);

// One sequential scan of the truncated univariate full conditionals.
void gibbs_sweep(LatentState& s, const Hyperparameters& th,
                 const GramFactor& gf, const std::vector<ClassLabel>& labels,
                 const Eigen::MatrixXd& H, Rng& rng);

Eigen::VectorXd update_beta(const LatentState& s, const Hyperparameters& th,
                            const GramFactor& gf, const Eigen::MatrixXd& H,
                            const PriorSpec& prior, Rng& rng);

struct MhSteps {
  double log_step_sigma2;
  Eigen::VectorXd log_step_delta;
};

struct MhOutcome {
  bool sigma2_accepted = false;
  std::vector<bool> delta_accepted;
};

// Random-walk proposals on log sigma2 and each log delta_k. The Gram factor
// is rebuilt only when a delta proposal is accepted; a non-positive-definite
// proposal counts as a rejection.
MhOutcome mh_update_scale_params(const LatentState& s, Hyperparameters& th,
                                 GramFactor& gf, const PriorSpec& prior,
                                 const Eigen::MatrixXd& H,
                                 const Eigen::MatrixXd& X,
                                 const MhSteps& steps, Rng& rng);

TraceSet run_chain(const LabelledDataset& d, const MeanBasis& basis,
                   const PriorSpec& prior, const McmcConfig& cfg);

}  // namespace gpclass
