#include "gpclass/testbed.hpp"

#include <cmath>
#include <limits>

namespace gpclass {

LabelledDataset example_1d() {
  const double xs[] = {0, 1, 3, 5, 6, 8, 11, 12, 15, 17, 19, 20};
  const int n = static_cast<int>(std::size(xs));
  LabelledDataset d;
  d.points.resize(n, 1);
  d.labels.reserve(n);
  for (int i = 0; i < n; ++i) {
    d.points(i, 0) = xs[i];
    d.labels.push_back(xs[i] < 7.0 ? ClassLabel::L1 : ClassLabel::L2);
  }
  d.bounds = {{0.0, 20.0}};
  validate_dataset(d);
  return d;
}

LabelledDataset example_2d_plane(std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<std::pair<double, double>> bounds{{-1.0, 7.0}, {-1.0, 7.0}};
  Eigen::MatrixXd pts = latin_hypercube(20, bounds, rng);
  LabelledDataset d;
  d.points = std::move(pts);
  d.bounds = bounds;
  d.labels.reserve(20);
  for (Eigen::Index i = 0; i < d.points.rows(); ++i)
    d.labels.push_back(d.points(i, 0) < 3.0 ? ClassLabel::L1 : ClassLabel::L2);
  validate_dataset(d);
  return d;
}

ClassLabel santner_label(const Eigen::Vector2d& x, const SantnerParams& params) {
  const double r2 = x.squaredNorm();
  return (r2 >= params.c1sq && r2 <= params.c2sq) ? ClassLabel::L1
                                                  : ClassLabel::L2;
}

double santner_f(const Eigen::Vector2d& x, const SantnerParams& params) {
  const double r2 = x.squaredNorm();
  if (r2 <= params.c1sq) return std::numeric_limits<double>::infinity();
  if (r2 <= params.c2sq)
    return std::exp(-(params.a.dot(x) + x.dot(params.Q * x))) /
           (r2 - params.c1sq);
  return -std::numeric_limits<double>::infinity();
}

LabelledDataset build_santner_dataset(std::uint64_t seed) {
  Rng rng(seed);
  const SantnerParams params;
  const std::vector<std::pair<double, double>> bounds{params.bound,
                                                      params.bound};
  Eigen::MatrixXd pts = maximin_lhs(50, bounds, 1000, rng);
  LabelledDataset d;
  d.points = std::move(pts);
  d.bounds = bounds;
  d.labels.reserve(50);
  for (Eigen::Index i = 0; i < d.points.rows(); ++i)
    d.labels.push_back(santner_label(d.points.row(i).transpose()));
  validate_dataset(d);
  return d;
}

}  // namespace gpclass
