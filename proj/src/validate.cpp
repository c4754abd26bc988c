#include "gpclass/validate.hpp"

#include <cmath>
#include <limits>

#include "gpclass/errors.hpp"
#include "gpclass/gp.hpp"
#include "gpclass/normal.hpp"

namespace gpclass {

MisclassReport loo_misclassification(const TraceSet& trace,
                                     const LabelledDataset& d) {
  if (trace.samples.empty()) throw EmptyTrace();
  const Eigen::Index n = d.n();
  const MeanBasis basis{trace.basis, static_cast<int>(d.p())};
  Eigen::MatrixXd H = basis_matrix(d.points, basis);

  const double p_floor = std::numeric_limits<double>::min();
  const double p_ceil = std::nextafter(1.0, 0.0);

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  for (const TraceSample& s : trace.samples) {
    GramFactor gf = gram_factor(d.points, s.delta);
    Eigen::VectorXd m = H * s.beta;
    Eigen::VectorXd r = gf.precision * (s.eta - m);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double qii = gf.precision(i, i);
      const double mu = s.eta(i) - r(i) / qii;
      const double sd = std::sqrt(s.sigma2 / qii);
      // Misclassified when the sign lands on the wrong side of zero.
      const double z = d.labels[static_cast<std::size_t>(i)] == ClassLabel::L2
                           ? -mu / sd
                           : mu / sd;
      double p = norm_cdf(z);
      if (p < p_floor) p = p_floor;
      if (p > p_ceil) p = p_ceil;
      acc(i) += p;
    }
  }

  MisclassReport rep;
  rep.rates = acc / static_cast<double>(trace.samples.size());
  rep.indices.resize(static_cast<std::size_t>(n));
  rep.labels = d.labels;
  for (Eigen::Index i = 0; i < n; ++i)
    rep.indices[static_cast<std::size_t>(i)] = static_cast<int>(i);
  return rep;
}

}  // namespace gpclass
