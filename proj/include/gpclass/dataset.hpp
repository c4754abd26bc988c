#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpclass/errors.hpp"
#include "gpclass/rng.hpp"

namespace gpclass {

enum class ClassLabel { L1, L2 };  // L1: eta < 0, L2: eta >= 0

std::string label_name(ClassLabel l);
ClassLabel parse_label(const std::string& text);

struct TransformRecord {
  Eigen::VectorXd shift;
  Eigen::VectorXd scale;  // all entries > 0
};

struct LabelledDataset {
  Eigen::MatrixXd points;  // n x p
  std::vector<ClassLabel> labels;
  std::vector<std::pair<double, double>> bounds;
  std::optional<TransformRecord> transform;

  Eigen::Index n() const { return points.rows(); }
  Eigen::Index p() const { return points.cols(); }
};

// Validates shape, both-classes-present and pairwise distinctness.
void validate_dataset(const LabelledDataset& d);

LabelledDataset load_dataset(const std::string& path, int p);
// Infers the input dimension from the header (x1,...,xp,label).
LabelledDataset load_dataset(const std::string& path);

// Shifts the midpoint of the two class centroids to the origin and scales
// each axis so the data range becomes 2. Returns the transformed dataset
// (transform recorded) alongside the record.
std::pair<LabelledDataset, TransformRecord> center_dataset(
    const LabelledDataset& d);

Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& points,
                                  const TransformRecord& t);
Eigen::MatrixXd apply_transform(const Eigen::MatrixXd& points,
                                const TransformRecord& t);

Eigen::MatrixXd latin_hypercube(
    int n, const std::vector<std::pair<double, double>>& bounds, Rng& rng);

Eigen::MatrixXd maximin_lhs(int n,
                            const std::vector<std::pair<double, double>>& bounds,
                            int restarts, Rng& rng);

double min_pairwise_distance(const Eigen::MatrixXd& X);

}  // namespace gpclass
