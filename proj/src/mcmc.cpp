#include "gpclass/mcmc.hpp"

#include <cmath>
#include <string>

#include "gpclass/truncnorm.hpp"

namespace gpclass {

void validate_prior(const PriorSpec& prior, int q, int p) {
  if (prior.beta_mean.size() != q || prior.beta_var.size() != q)
    throw UsageError("prior beta dimensions do not match the basis");
  if (prior.delta_scale.size() != p)
    throw UsageError("prior delta_scale dimension does not match the data");
  if (!(prior.sigma2_shape > 1.0) || !(prior.delta_shape > 1.0))
    throw UsageError("inverse-gamma shape parameters must exceed 1");
  if (!(prior.sigma2_scale > 0.0)) throw NonPositiveScale();
  for (Eigen::Index k = 0; k < prior.delta_scale.size(); ++k)
    if (!(prior.delta_scale[k] > 0.0)) throw NonPositiveScale();
  for (Eigen::Index j = 0; j < prior.beta_var.size(); ++j)
    if (!(prior.beta_var[j] > 0.0)) throw NonPositiveScale();
  if (prior.tight_intercept && prior.beta_var[0] > 0.25)
    throw UsageError("tight intercept requires beta_var[0] <= 0.25");
}

PriorSpec default_prior(const LabelledDataset& d, const MeanBasis& basis,
                        bool centered) {
  PriorSpec prior;
  const int q = basis.q();
  prior.beta_mean = Eigen::VectorXd::Zero(q);
  prior.beta_var = Eigen::VectorXd::Constant(q, 100.0);
  prior.tight_intercept = centered;
  if (centered) prior.beta_var[0] = 0.25;
  prior.delta_scale.resize(d.p());
  for (Eigen::Index k = 0; k < d.p(); ++k) {
    const double range = d.bounds[static_cast<std::size_t>(k)].second -
                         d.bounds[static_cast<std::size_t>(k)].first;
    const double half = range > 0.0 ? range / 2.0 : 1.0;
    prior.delta_scale[k] = 2.0 * half * half;
  }
  return prior;
}

void validate_config(const McmcConfig& cfg) {
  if (cfg.iterations < 1) throw UsageError("iterations must be >= 1");
  if (cfg.burnin < 0 || cfg.burnin >= cfg.iterations)
    throw UsageError("burnin must be < iterations");
  if (cfg.thin < 1) throw UsageError("thin must be >= 1");
  if (cfg.gibbs_sweeps_per_iter < 1)
    throw UsageError("gibbs_sweeps_per_iter must be >= 1");
  if (!(cfg.mh_step_sigma2 > 0.0) || !(cfg.mh_step_delta > 0.0))
    throw NonPositiveScale();
}

std::pair<LatentState, Hyperparameters> init_state(
    const LabelledDataset& d, const MeanBasis& basis, const PriorSpec& prior,
    Rng& rng) {
  const int q = basis.q();
  Hyperparameters th;
  th.beta.resize(q);
  for (int j = 0; j < q; ++j)
    th.beta[j] = prior.beta_mean[j] + std::sqrt(prior.beta_var[j]) * rng.normal();
  th.sigma2 = rng.inverse_gamma(prior.sigma2_shape, prior.sigma2_scale);
  th.delta.resize(d.p());
  for (Eigen::Index k = 0; k < d.p(); ++k)
    th.delta[k] = rng.inverse_gamma(prior.delta_shape, prior.delta_scale[k]);
  LatentState s;
  s.eta.resize(d.n());
  const double sd = std::sqrt(th.sigma2);
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    double z;
    do {
      z = sd * rng.normal();
    } while (z == 0.0 && d.labels[static_cast<std::size_t>(i)] == ClassLabel::L1);
    s.eta[i] = d.labels[static_cast<std::size_t>(i)] == ClassLabel::L1
                   ? -std::abs(z)
                   : std::abs(z);
  }
  return {std::move(s), std::move(th)};
}

void gibbs_sweep(LatentState& s, const Hyperparameters& th,
                 const GramFactor& gf, const std::vector<ClassLabel>& labels,
                 const Eigen::MatrixXd& H, Rng& rng) {
  const Eigen::Index n = s.eta.size();
  const Eigen::VectorXd m = H * th.beta;
  const Eigen::MatrixXd& Q = gf.precision;
  Eigen::VectorXd r = Q * (s.eta - m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double qii = Q(i, i);
    const double si = std::sqrt(th.sigma2 / qii);
    const double mui = m[i] - (r[i] - qii * (s.eta[i] - m[i])) / qii;
    const auto side = labels[static_cast<std::size_t>(i)] == ClassLabel::L1
                          ? Truncation::NegativeHalfLine
                          : Truncation::NonNegativeHalfLine;
    const double fresh = sample_tn(mui, si, side, rng);
    const double d = fresh - s.eta[i];
    if (d != 0.0) r.noalias() += Q.col(i) * d;
    s.eta[i] = fresh;
  }
}

Eigen::VectorXd update_beta(const LatentState& s, const Hyperparameters& th,
                            const GramFactor& gf, const Eigen::MatrixXd& H,
                            const PriorSpec& prior, Rng& rng) {
  const Eigen::Index q = H.cols();
  const Eigen::MatrixXd QH = gf.precision * H;
  Eigen::MatrixXd A = H.transpose() * QH / th.sigma2;
  A.diagonal() += prior.beta_var.cwiseInverse();
  Eigen::VectorXd b = QH.transpose() * s.eta / th.sigma2 +
                      prior.beta_mean.cwiseQuotient(prior.beta_var);
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("update_beta");
  const Eigen::VectorXd mean = llt.solve(b);
  Eigen::VectorXd z(q);
  for (Eigen::Index j = 0; j < q; ++j) z[j] = rng.normal();
  const Eigen::MatrixXd L = llt.matrixL();
  return mean + L.transpose().triangularView<Eigen::Upper>().solve(z);
}

namespace {

double log_inv_gamma(double x, double shape, double scale) {
  return shape * std::log(scale) - std::lgamma(shape) -
         (shape + 1.0) * std::log(x) - scale / x;
}

double log_posterior_theta(const LatentState& s, const Hyperparameters& th,
                           const PriorSpec& prior, const Eigen::MatrixXd& H,
                           const GramFactor& gf) {
  double lp = log_mvn_density(s.eta, th, H, gf);
  lp += log_inv_gamma(th.sigma2, prior.sigma2_shape, prior.sigma2_scale) +
        std::log(th.sigma2);
  for (Eigen::Index k = 0; k < th.delta.size(); ++k)
    lp += log_inv_gamma(th.delta[k], prior.delta_shape, prior.delta_scale[k]) +
          std::log(th.delta[k]);
  return lp;
}

}  // namespace

MhOutcome mh_update_scale_params(const LatentState& s, Hyperparameters& th,
                                 GramFactor& gf, const PriorSpec& prior,
                                 const Eigen::MatrixXd& H,
                                 const Eigen::MatrixXd& X,
                                 const MhSteps& steps, Rng& rng) {
  MhOutcome out;
  double cur_lp = log_posterior_theta(s, th, prior, H, gf);

  {
    const double z = rng.normal();
    const double u = rng.uniform_open();
    Hyperparameters cand = th;
    cand.sigma2 = std::exp(std::log(th.sigma2) +
                           std::exp(steps.log_step_sigma2) * z);
    if (std::isfinite(cand.sigma2) && cand.sigma2 > 0.0) {
      const double lp = log_posterior_theta(s, cand, prior, H, gf);
      if (std::log(u) < lp - cur_lp) {
        th.sigma2 = cand.sigma2;
        cur_lp = lp;
        out.sigma2_accepted = true;
      }
    }
  }

  out.delta_accepted.assign(static_cast<std::size_t>(th.delta.size()), false);
  for (Eigen::Index k = 0; k < th.delta.size(); ++k) {
    const double z = rng.normal();
    const double u = rng.uniform_open();
    Hyperparameters cand = th;
    cand.delta[k] =
        std::exp(std::log(th.delta[k]) + std::exp(steps.log_step_delta[k]) * z);
    if (!std::isfinite(cand.delta[k]) || !(cand.delta[k] > 0.0)) continue;
    GramFactor gf_cand;
    try {
      gf_cand = gram_factor(X, cand.delta);
    } catch (const NotPositiveDefinite&) {
      continue;
    }
    const double lp = log_posterior_theta(s, cand, prior, H, gf_cand);
    if (std::log(u) < lp - cur_lp) {
      th.delta[k] = cand.delta[k];
      gf = std::move(gf_cand);
      cur_lp = lp;
      out.delta_accepted[static_cast<std::size_t>(k)] = true;
    }
  }
  return out;
}

TraceSet run_chain(const LabelledDataset& d, const MeanBasis& basis,
                   const PriorSpec& prior, const McmcConfig& cfg) {
  validate_dataset(d);
  validate_config(cfg);
  validate_prior(prior, basis.q(), static_cast<int>(d.p()));

  Rng rng(cfg.seed);
  auto [state, th] = init_state(d, basis, prior, rng);
  const Eigen::MatrixXd H = basis_matrix(d.points, basis);
  GramFactor gf = gram_factor(d.points, th.delta);

  MhSteps steps;
  steps.log_step_sigma2 = std::log(cfg.mh_step_sigma2);
  steps.log_step_delta =
      Eigen::VectorXd::Constant(d.p(), std::log(cfg.mh_step_delta));

  TraceSet trace;
  trace.config = cfg;
  trace.basis = basis.kind;
  trace.prior = prior;
  const int kept =
      (cfg.iterations - cfg.burnin + cfg.thin - 1) / cfg.thin;
  trace.samples.reserve(static_cast<std::size_t>(kept));

  long acc_s2 = 0;
  Eigen::VectorXd acc_d = Eigen::VectorXd::Zero(d.p());
  long post_iters = 0;

  for (int iter = 1; iter <= cfg.iterations; ++iter) {
    try {
      for (int sweep = 0; sweep < cfg.gibbs_sweeps_per_iter; ++sweep) {
        gibbs_sweep(state, th, gf, d.labels, H, rng);
        for (Eigen::Index i = 0; i < d.n(); ++i) {
          const bool neg = state.eta[i] < 0.0;
          const bool want_neg =
              d.labels[static_cast<std::size_t>(i)] == ClassLabel::L1;
          if (neg != want_neg)
            throw NumericalError("sign constraint violated at index " +
                                 std::to_string(i));
        }
      }
      th.beta = update_beta(state, th, gf, H, prior, rng);
      const MhOutcome mh =
          mh_update_scale_params(state, th, gf, prior, H, d.points, steps, rng);

      if (cfg.adapt && iter <= cfg.burnin) {
        const double gain = std::pow(static_cast<double>(iter), -0.6);
        steps.log_step_sigma2 +=
            gain * ((mh.sigma2_accepted ? 1.0 : 0.0) - 0.3);
        for (Eigen::Index k = 0; k < d.p(); ++k)
          steps.log_step_delta[k] +=
              gain *
              ((mh.delta_accepted[static_cast<std::size_t>(k)] ? 1.0 : 0.0) -
               0.3);
      }
      if (iter > cfg.burnin) {
        ++post_iters;
        acc_s2 += mh.sigma2_accepted ? 1 : 0;
        for (Eigen::Index k = 0; k < d.p(); ++k)
          acc_d[k] += mh.delta_accepted[static_cast<std::size_t>(k)] ? 1.0 : 0.0;
        if ((iter - cfg.burnin) % cfg.thin == 0) {
          TraceSample rec;
          rec.iter = iter;
          rec.eta = state.eta;
          rec.beta = th.beta;
          rec.sigma2 = th.sigma2;
          rec.delta = th.delta;
          trace.samples.push_back(std::move(rec));
        }
      }
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (iteration " +
                           std::to_string(iter) + ")");
    }
  }
  trace.accept_sigma2 =
      post_iters > 0 ? static_cast<double>(acc_s2) / post_iters : 0.0;
  trace.accept_delta =
      post_iters > 0 ? (acc_d / static_cast<double>(post_iters)).eval()
                     : Eigen::VectorXd::Zero(d.p());
  return trace;
}

}  // namespace gpclass
