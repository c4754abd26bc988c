#pragma once

#include <Eigen/Dense>

#include "gpclass/dataset.hpp"

namespace gpclass {

struct SantnerParams {
  Eigen::Vector2d a{3.0, 5.0};
  Eigen::Matrix2d Q{{2.0, 1.5}, {1.5, 4.0}};
  double c1sq = 0.0625;  // 0.25^2
  double c2sq = 0.5625;  // 0.75^2
  std::pair<double, double> bound{-1.25, 1.25};
};

// Twelve fixed 1-D inputs on [0,20]; the region boundary sits near x=7.
LabelledDataset example_1d();

// 20-point LHS over [-1,7]^2, labelled by which side of the plane x1=3
// each point falls on.
LabelledDataset example_2d_plane(std::uint64_t seed);

// Annulus membership: L1 inside the ring c1 <= r <= c2, L2 elsewhere.
ClassLabel santner_label(const Eigen::Vector2d& x,
                         const SantnerParams& params = {});

// Piecewise test function: +inf inside the inner disc, -inf outside the
// outer circle, exp(-(a'x + x'Qx))/(r^2 - c1^2) on the ring. Cases are
// evaluated in that order, so both circle boundaries resolve to the
// earlier case (r^2 = c1^2 gives +inf even though the label there is L1).
double santner_f(const Eigen::Vector2d& x, const SantnerParams& params = {});

// 50-point maximin LHS (1000 restarts) over the Santner square.
LabelledDataset build_santner_dataset(std::uint64_t seed);

}  // namespace gpclass
