#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gpclass/dataset.hpp"
#include "gpclass/gp.hpp"
#include "gpclass/mcmc.hpp"

namespace gpclass {

struct PredictionGrid {
  Eigen::MatrixXd points;             // m x p, first axis slowest
  std::vector<int> resolution;        // per axis; empty for arbitrary lists
  std::vector<Eigen::VectorXd> axes;  // tensor-grid coordinates per axis

  Eigen::Index m() const { return points.rows(); }
  bool is_tensor() const { return !axes.empty(); }
};

PredictionGrid make_grid(const std::vector<std::pair<double, double>>& bounds,
                         const std::vector<int>& resolution);
PredictionGrid grid_from_points(Eigen::MatrixXd pts);

struct ProbabilityField {
  PredictionGrid grid;
  Eigen::VectorXd prob_r1;
  Eigen::VectorXd mean_eta;
  int samples_used = 0;
};

struct BoundarySummary1D {
  double median = 0.0;
  double lower95 = 0.0;
  double upper95 = 0.0;
  std::vector<int> per_sample_crossings;

  int excluded_draws() const {
    int c = 0;
    for (int k : per_sample_crossings)
      if (k != 1) ++c;
    return c;
  }
};

// One joint draw of the latent process over Xs given a retained sample.
Eigen::VectorXd predictive_draw(const TraceSample& sample,
                                const Eigen::MatrixXd& X, const MeanBasis& b,
                                const Eigen::MatrixXd& Xs,
                                const GramFactor& gf, Rng& rng);

ProbabilityField classify_grid(const TraceSet& trace, const LabelledDataset& d,
                               const PredictionGrid& grid, Rng& rng);

BoundarySummary1D boundary_1d(const TraceSet& trace, const LabelledDataset& d,
                              const PredictionGrid& grid, Rng& rng);

Eigen::VectorXd posterior_mean_surface(const TraceSet& trace,
                                       const LabelledDataset& d,
                                       const PredictionGrid& grid);

// Shared engine: joint predictive draws per retained sample, streaming
// probability/mean accumulation, optional 1-D crossing tracking. On 2-D
// tensor grids the mean per-draw adjacent-cell label disagreement is
// recorded as a smoothness diagnostic of the sampled label fields.
struct JointPredictionResult {
  ProbabilityField field;
  std::vector<double> crossings;       // draws with exactly one crossing
  std::vector<int> crossing_counts;    // per draw
  double adjacent_disagreement = -1.0; // -1 when not applicable
};

// Fraction of horizontally or vertically adjacent cell pairs in an r1 x r2
// row-major field whose labels differ.
double adjacent_disagreement_signs(const Eigen::VectorXd& field, int r1,
                                   int r2);
double adjacent_disagreement_labels(const std::vector<ClassLabel>& labels,
                                    int r1, int r2);

JointPredictionResult predict_joint(const TraceSet& trace,
                                    const LabelledDataset& d,
                                    const PredictionGrid& grid, Rng& rng,
                                    bool track_crossings);

double quantile_type7(std::vector<double> values, double prob);

}  // namespace gpclass
