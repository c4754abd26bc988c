#include "gpclass/predict.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "gpclass/errors.hpp"

namespace gpclass {

namespace {

Eigen::MatrixXd axis_column(const Eigen::VectorXd& v) {
  Eigen::MatrixXd out(v.size(), 1);
  out.col(0) = v;
  return out;
}

// Per-axis pieces of a separable grid covariance for one retained sample.
struct AxisFactor {
  Eigen::MatrixXd chol;   // r_k x r_k lower Cholesky of C_k + eps I
  Eigen::MatrixXd cross;  // r_k x n correlation against training coordinates
};

AxisFactor build_axis_factor(const Eigen::VectorXd& axis,
                             const Eigen::MatrixXd& X, int k, double delta_k) {
  Eigen::VectorXd dk(1);
  dk << delta_k;
  Eigen::MatrixXd pts = axis_column(axis);
  Eigen::MatrixXd C = correlation_matrix(pts, dk);
  AxisFactor f;
  f.chol = cholesky_jittered(C, nugget_for(axis.size()), "grid axis gram").first;
  f.cross = cross_correlation(pts, axis_column(X.col(k)), dk);
  return f;
}

Eigen::MatrixXd kron_solve(const Eigen::MatrixXd& L1, const Eigen::MatrixXd& L2,
                           const Eigen::MatrixXd& M) {
  // (C1 (x) C2)^{-1} on a matrix laid out with the first axis as rows.
  Eigen::MatrixXd W = L1.triangularView<Eigen::Lower>().solve(M);
  W = L1.transpose().triangularView<Eigen::Upper>().solve(W);
  Eigen::MatrixXd Wt = L2.triangularView<Eigen::Lower>().solve(W.transpose());
  Wt = L2.transpose().triangularView<Eigen::Upper>().solve(Wt);
  return Wt.transpose();
}

// Exact joint draw over a tensor grid: sample the prior jointly on the grid,
// condition the training-point values on that path, and correct the kriging
// mean with the conditioned residual. Costs O(r^3 + n^3) per sample instead
// of O(m^3) for the dense grid factorization.
Eigen::VectorXd tensor_joint_draw(const TraceSample& s,
                                  const Eigen::MatrixXd& X, const MeanBasis& b,
                                  const PredictionGrid& grid,
                                  const GramFactor& gf, Rng& rng) {
  const auto p = grid.axes.size();
  const Eigen::Index n = X.rows();
  const double sigma = std::sqrt(s.sigma2);

  AxisFactor f1 = build_axis_factor(grid.axes[0], X, 0, s.delta[0]);
  AxisFactor f2;
  if (p == 2) {
    f2 = build_axis_factor(grid.axes[1], X, 1, s.delta[1]);
  } else {
    f2.chol = Eigen::MatrixXd::Ones(1, 1);
    f2.cross = Eigen::MatrixXd::Ones(1, n);
  }
  const Eigen::Index r1 = f1.chol.rows();
  const Eigen::Index r2 = f2.chol.rows();

  Eigen::MatrixXd Z(r1, r2);
  for (Eigen::Index i = 0; i < r1; ++i)
    for (Eigen::Index j = 0; j < r2; ++j) Z(i, j) = rng.normal();

  Eigen::MatrixXd Vmat =
      sigma * (f1.chol * Z * f2.chol.transpose());          // prior path on grid
  Eigen::MatrixXd KinvV = kron_solve(f1.chol, f2.chol, Vmat);

  // G_k = (C_k + eps I)^{-1} cross_k, so K^{-1} Cs columns are outer products.
  Eigen::MatrixXd G1 = f1.chol.triangularView<Eigen::Lower>().solve(f1.cross);
  G1 = f1.chol.transpose().triangularView<Eigen::Upper>().solve(G1);
  Eigen::MatrixXd G2 = f2.chol.triangularView<Eigen::Lower>().solve(f2.cross);
  G2 = f2.chol.transpose().triangularView<Eigen::Upper>().solve(G2);

  Eigen::MatrixXd S = (f1.cross.transpose() * G1)
                          .cwiseProduct(f2.cross.transpose() * G2);  // Cs' K^{-1} Cs

  Eigen::VectorXd mu_u(n);
  for (Eigen::Index t = 0; t < n; ++t)
    mu_u(t) = f1.cross.col(t).dot(KinvV * f2.cross.col(t));

  Eigen::MatrixXd Ctrain = correlation_matrix(X, s.delta);
  Ctrain.diagonal().array() += gf.nugget;
  Eigen::MatrixXd cov_u = s.sigma2 * (Ctrain - S);
  Eigen::MatrixXd Lu =
      cholesky_jittered(cov_u, s.sigma2 * nugget_for(n),
                        "conditioned training covariance")
          .first;

  Eigen::VectorXd z2(n);
  for (Eigen::Index t = 0; t < n; ++t) z2(t) = rng.normal();
  Eigen::VectorXd u = mu_u + Lu * z2;

  Eigen::MatrixXd H = basis_matrix(X, b);
  Eigen::VectorXd w = gf.precision * (s.eta - H * s.beta - u);

  Eigen::MatrixXd Hs = basis_matrix(grid.points, b);
  Eigen::VectorXd draw = Hs * s.beta;
  // Cs * w assembled from the per-axis outer-product columns of Cs.
  Vmat.noalias() += f1.cross * (w.asDiagonal() * f2.cross.transpose());
  for (Eigen::Index i = 0; i < r1; ++i)
    for (Eigen::Index j = 0; j < r2; ++j) draw(i * r2 + j) += Vmat(i, j);
  return draw;
}

}  // namespace

PredictionGrid make_grid(const std::vector<std::pair<double, double>>& bounds,
                         const std::vector<int>& resolution) {
  if (bounds.empty() || bounds.size() != resolution.size())
    throw UsageError("grid bounds and resolution must match and be non-empty");
  const auto p = static_cast<Eigen::Index>(bounds.size());
  PredictionGrid g;
  g.resolution = resolution;
  Eigen::Index m = 1;
  for (std::size_t k = 0; k < bounds.size(); ++k) {
    if (resolution[k] < 2)
      throw UsageError("grid resolution must be at least 2 per axis");
    if (!(bounds[k].second > bounds[k].first)) throw EmptyBounds(k);
    Eigen::VectorXd axis(resolution[k]);
    const double lo = bounds[k].first, hi = bounds[k].second;
    for (int i = 0; i < resolution[k]; ++i)
      axis(i) = lo + (hi - lo) * static_cast<double>(i) / (resolution[k] - 1);
    g.axes.push_back(axis);
    m *= resolution[k];
  }
  g.points.resize(m, p);
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::Index idx = j;
    for (Eigen::Index k = p - 1; k >= 0; --k) {
      const Eigen::Index rk = g.axes[static_cast<std::size_t>(k)].size();
      g.points(j, k) = g.axes[static_cast<std::size_t>(k)](idx % rk);
      idx /= rk;
    }
  }
  return g;
}

PredictionGrid grid_from_points(Eigen::MatrixXd pts) {
  if (pts.rows() == 0 || pts.cols() == 0)
    throw UsageError("prediction grid must contain at least one point");
  PredictionGrid g;
  g.points = std::move(pts);
  return g;
}

Eigen::VectorXd predictive_draw(const TraceSample& sample,
                                const Eigen::MatrixXd& X, const MeanBasis& b,
                                const Eigen::MatrixXd& Xs,
                                const GramFactor& gf, Rng& rng) {
  Hyperparameters th{sample.beta, sample.sigma2, sample.delta};
  auto [mean, cov] = conditional_mvn(X, sample.eta, th, b, Xs, gf);
  // When Xs touches training points the residual covariance is cancellation
  // noise at the sigma2 * nugget scale, so the factorization needs a base
  // jitter on that scale rather than starting from zero.
  const double base = th.sigma2 * nugget_for(Xs.rows());
  const auto [L, eps] = cholesky_jittered(cov, base, "predictive_draw");
  Eigen::VectorXd z(mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return mean + L * z;
}

double adjacent_disagreement_signs(const Eigen::VectorXd& field, int r1,
                                   int r2) {
  if (static_cast<Eigen::Index>(r1) * r2 != field.size())
    throw DimensionMismatch("field size vs grid shape");
  long pairs = 0, diff = 0;
  auto neg = [&](int i, int j) { return field(static_cast<Eigen::Index>(i) * r2 + j) < 0.0; };
  for (int i = 0; i < r1; ++i)
    for (int j = 0; j < r2; ++j) {
      if (j + 1 < r2) {
        ++pairs;
        if (neg(i, j) != neg(i, j + 1)) ++diff;
      }
      if (i + 1 < r1) {
        ++pairs;
        if (neg(i, j) != neg(i + 1, j)) ++diff;
      }
    }
  return static_cast<double>(diff) / static_cast<double>(pairs);
}

double adjacent_disagreement_labels(const std::vector<ClassLabel>& labels,
                                    int r1, int r2) {
  Eigen::VectorXd f(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t k = 0; k < labels.size(); ++k)
    f(static_cast<Eigen::Index>(k)) = labels[k] == ClassLabel::L1 ? -1.0 : 1.0;
  return adjacent_disagreement_signs(f, r1, r2);
}

JointPredictionResult predict_joint(const TraceSet& trace,
                                    const LabelledDataset& d,
                                    const PredictionGrid& grid, Rng& rng,
                                    bool track_crossings) {
  if (trace.samples.empty()) throw EmptyTrace();
  const Eigen::Index m = grid.m();
  const Eigen::Index p = d.p();
  if (grid.points.cols() != p)
    throw DimensionMismatch("grid dimension does not match the dataset");
  if (track_crossings && p != 1)
    throw UsageError("crossing tracking requires a one dimensional grid");

  const bool tensor = grid.is_tensor() && grid.axes.size() <= 2;
  const bool track_adjacency = grid.resolution.size() == 2;

  JointPredictionResult out;
  out.field.grid = grid;
  out.field.prob_r1 = Eigen::VectorXd::Zero(m);
  out.field.mean_eta = Eigen::VectorXd::Zero(m);
  out.field.samples_used = static_cast<int>(trace.samples.size());

  const MeanBasis basis{trace.basis, static_cast<int>(p)};
  double disagreement_acc = 0.0;
  Eigen::VectorXd neg_count = Eigen::VectorXd::Zero(m);
  for (const TraceSample& s : trace.samples) {
    GramFactor gf = gram_factor(d.points, s.delta);
    Eigen::VectorXd draw =
        tensor ? tensor_joint_draw(s, d.points, basis, grid, gf, rng)
               : predictive_draw(s, d.points, basis, grid.points, gf, rng);
    for (Eigen::Index j = 0; j < m; ++j) {
      if (draw(j) < 0.0) neg_count(j) += 1.0;
      out.field.mean_eta(j) += draw(j);
    }
    if (track_adjacency)
      disagreement_acc += adjacent_disagreement_signs(
          draw, grid.resolution[0], grid.resolution[1]);
    if (track_crossings) {
      int flips = 0;
      double crossing = 0.0;
      for (Eigen::Index j = 0; j + 1 < m; ++j) {
        const bool neg0 = draw(j) < 0.0, neg1 = draw(j + 1) < 0.0;
        if (neg0 != neg1) {
          ++flips;
          const double x0 = grid.points(j, 0), x1 = grid.points(j + 1, 0);
          crossing = x0 - draw(j) * (x1 - x0) / (draw(j + 1) - draw(j));
        }
      }
      out.crossing_counts.push_back(flips);
      if (flips == 1) out.crossings.push_back(crossing);
    }
  }
  const double ns = static_cast<double>(trace.samples.size());
  out.field.prob_r1 = neg_count / ns;
  out.field.mean_eta /= ns;
  if (track_adjacency) out.adjacent_disagreement = disagreement_acc / ns;
  return out;
}

ProbabilityField classify_grid(const TraceSet& trace, const LabelledDataset& d,
                               const PredictionGrid& grid, Rng& rng) {
  return predict_joint(trace, d, grid, rng, false).field;
}

double quantile_type7(std::vector<double> values, double prob) {
  if (values.empty()) throw UsageError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  if (n == 1) return values[0];
  const double h = static_cast<double>(n - 1) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - std::floor(h);
  if (lo + 1 >= n) return values[n - 1];
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

BoundarySummary1D boundary_1d(const TraceSet& trace, const LabelledDataset& d,
                              const PredictionGrid& grid, Rng& rng) {
  if (grid.points.cols() != 1)
    throw UsageError("boundary_1d requires a one dimensional grid");
  JointPredictionResult jp = predict_joint(trace, d, grid, rng, true);
  if (jp.crossings.empty()) throw NoCrossings();
  BoundarySummary1D b;
  b.per_sample_crossings = jp.crossing_counts;
  b.median = quantile_type7(jp.crossings, 0.5);
  b.lower95 = quantile_type7(jp.crossings, 0.025);
  b.upper95 = quantile_type7(jp.crossings, 0.975);
  return b;
}

Eigen::VectorXd posterior_mean_surface(const TraceSet& trace,
                                       const LabelledDataset& d,
                                       const PredictionGrid& grid) {
  if (trace.samples.empty()) throw EmptyTrace();
  if (grid.points.cols() != d.p())
    throw DimensionMismatch("grid dimension does not match the dataset");
  const MeanBasis basis{trace.basis, static_cast<int>(d.p())};
  Eigen::MatrixXd Hs = basis_matrix(grid.points, basis);
  Eigen::MatrixXd H = basis_matrix(d.points, basis);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(grid.m());
  for (const TraceSample& s : trace.samples) {
    GramFactor gf = gram_factor(d.points, s.delta);
    Eigen::MatrixXd Cs = cross_correlation(grid.points, d.points, s.delta);
    acc += Hs * s.beta + Cs * (gf.precision * (s.eta - H * s.beta));
  }
  return acc / static_cast<double>(trace.samples.size());
}

}  // namespace gpclass
