#pragma once

#include <optional>
#include <string>

#include "gpclass/baselines.hpp"
#include "gpclass/dataset.hpp"
#include "gpclass/io.hpp"
#include "gpclass/mcmc.hpp"
#include "gpclass/predict.hpp"
#include "gpclass/validate.hpp"

namespace gpclass {

// End-to-end pipeline for one of the built-in example problems: generate
// the data, fit, predict over the default grid, run the leave-one-out
// diagnostic and both baselines. Everything an output file reports is in
// original input units.
struct DemoResult {
  std::string name;
  std::uint64_t seed = 0;
  LabelledDataset data;         // original units
  LabelledDataset fitted;       // centered coordinates used by the chain
  std::optional<TransformRecord> transform;
  RunConfig config;             // effective configuration
  TraceSet trace;
  PredictionGrid grid;          // original units
  ProbabilityField field;       // probabilities over grid
  double adjacent_disagreement = -1.0;  // 2-D grids only
  std::optional<BoundarySummary1D> boundary;  // 1-D demos, original units
  MisclassReport loo;
  LogisticModel logistic;
  Eigen::VectorXd logistic_field;
  Eigen::VectorXd bernoulli_avg;
  Eigen::VectorXd voronoi_field;  // 1 where the nearest neighbor is L1
  std::string summary_json;
};

// Known names: oned, plane, santner.
DemoResult run_demo(const std::string& name, std::uint64_t seed);
DemoResult run_demo(const std::string& name, std::uint64_t seed,
                    const McmcConfig& mcmc);

void write_demo_outputs(const DemoResult& r, const std::string& out_dir);

}  // namespace gpclass
