#pragma once

#include <optional>
#include <string>

#include "gpclass/dataset.hpp"
#include "gpclass/mcmc.hpp"
#include "gpclass/predict.hpp"
#include "gpclass/validate.hpp"

namespace gpclass {

// All floating-point output uses shortest round-trip formatting so repeated
// runs with the same seed produce byte-identical files.
std::string format_double(double v);

void write_dataset_csv(const std::string& path, const LabelledDataset& d);

void write_field_csv(const std::string& path, const Eigen::MatrixXd& points,
                     const Eigen::VectorXd& prob_r1,
                     const Eigen::VectorXd& mean_eta);

void write_loo_csv(const std::string& path, const Eigen::MatrixXd& points,
                   const LabelledDataset& d, const MisclassReport& rep);

void write_boundary_json(const std::string& path, const BoundarySummary1D& b);

// The header records whether the fit ran in centered coordinates and, if
// so, the transform, since any later prediction must reproduce it exactly.
struct TraceFile {
  TraceSet trace;
  std::optional<TransformRecord> transform;
};

void write_trace_jsonl(const std::string& path, const TraceSet& trace,
                       const std::optional<TransformRecord>& transform);
TraceFile read_trace(const std::string& path);

struct GridSpec {
  std::vector<int> resolution;
  double extend = 0.0;  // widen each bound by this fraction of the range
};

struct RunConfig {
  BasisKind mean_basis = BasisKind::Linear;
  bool center = true;
  McmcConfig mcmc;
  GridSpec grid;
  std::string output_dir = ".";
  // Prior overrides; anything unset falls back to defaults built from the
  // dataset at fit time.
  std::optional<double> sigma2_shape, sigma2_scale, delta_shape;
  std::optional<std::vector<double>> delta_scale;
  std::optional<std::vector<double>> beta_mean, beta_var;
  std::optional<bool> tight_intercept;
};

RunConfig default_run_config();
RunConfig load_run_config(const std::string& path);
std::string run_config_echo(const RunConfig& cfg);

// Materialize the effective prior for a dataset, applying any overrides.
PriorSpec build_prior(const RunConfig& cfg, const LabelledDataset& d);

std::vector<std::pair<double, double>> extended_bounds(
    const LabelledDataset& d, double extend);

}  // namespace gpclass
