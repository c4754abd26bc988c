#include "gpclass/demo.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "gpclass/errors.hpp"
#include "gpclass/testbed.hpp"
#include "json.hpp"

namespace gpclass {

namespace {

using nlohmann::json;

PredictionGrid transform_grid(const PredictionGrid& g,
                              const TransformRecord& t) {
  PredictionGrid out = g;
  out.points = apply_transform(g.points, t);
  for (std::size_t k = 0; k < out.axes.size(); ++k)
    out.axes[k] =
        ((out.axes[k].array() - t.shift[static_cast<Eigen::Index>(k)]) /
         t.scale[static_cast<Eigen::Index>(k)])
            .matrix();
  return out;
}

bool truth_is_l1(const std::string& name, const Eigen::VectorXd& x) {
  if (name == "oned") return x(0) < 7.0;
  if (name == "plane") return x(0) < 3.0;
  return santner_label(Eigen::Vector2d(x(0), x(1))) == ClassLabel::L1;
}

json vec_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string build_summary(const DemoResult& r) {
  json j;
  j["demo"] = r.name;
  j["seed"] = r.seed;
  j["n"] = r.data.n();
  j["p"] = r.data.p();
  j["basis"] = basis_name(r.trace.basis);
  j["retained_samples"] = r.trace.samples.size();
  j["accept_sigma2"] = r.trace.accept_sigma2;
  j["accept_delta"] = vec_json(r.trace.accept_delta);

  Eigen::VectorXd beta_mean =
      Eigen::VectorXd::Zero(r.trace.samples.front().beta.size());
  Eigen::VectorXd delta_mean =
      Eigen::VectorXd::Zero(r.trace.samples.front().delta.size());
  double sigma2_mean = 0.0;
  for (const TraceSample& s : r.trace.samples) {
    beta_mean += s.beta;
    delta_mean += s.delta;
    sigma2_mean += s.sigma2;
  }
  const double ns = static_cast<double>(r.trace.samples.size());
  json pm;
  pm["beta"] = vec_json(beta_mean / ns);
  pm["sigma2"] = sigma2_mean / ns;
  pm["delta"] = vec_json(delta_mean / ns);
  j["posterior_mean"] = pm;

  if (r.boundary) {
    json b;
    b["median"] = r.boundary->median;
    b["lower95"] = r.boundary->lower95;
    b["upper95"] = r.boundary->upper95;
    b["width"] = r.boundary->upper95 - r.boundary->lower95;
    b["excluded_draws"] = r.boundary->excluded_draws();
    j["boundary"] = b;
  }
  if (r.adjacent_disagreement >= 0.0)
    j["adjacent_disagreement"] = r.adjacent_disagreement;

  json loo;
  loo["rates"] = vec_json(r.loo.rates);
  std::vector<int> order(r.loo.indices);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return r.loo.rates(a) > r.loo.rates(b);
  });
  loo["order"] = order;
  j["loo"] = loo;

  long agree = 0;
  for (Eigen::Index g = 0; g < r.grid.m(); ++g) {
    const bool pred_l1 = r.field.prob_r1(g) > 0.5;
    if (pred_l1 == truth_is_l1(r.name, r.grid.points.row(g).transpose()))
      ++agree;
  }
  j["sign_agreement"] =
      static_cast<double>(agree) / static_cast<double>(r.grid.m());

  json lg;
  lg["coeffs"] = vec_json(r.logistic.coeffs);
  lg["converged"] = r.logistic.converged;
  lg["perfect_separation"] = r.logistic.perfect_separation;
  lg["bernoulli_max_dev"] =
      (r.bernoulli_avg - r.logistic_field).cwiseAbs().maxCoeff();
  j["logistic"] = lg;
  return j.dump(2) + "\n";
}

}  // namespace

DemoResult run_demo(const std::string& name, std::uint64_t seed) {
  McmcConfig cfg;
  cfg.seed = seed;
  return run_demo(name, seed, cfg);
}

DemoResult run_demo(const std::string& name, std::uint64_t seed,
                    const McmcConfig& mcmc) {
  DemoResult r;
  r.name = name;
  r.seed = seed;
  RunConfig cfg = default_run_config();
  cfg.mcmc = mcmc;
  if (name == "oned") {
    r.data = example_1d();
    cfg.mean_basis = BasisKind::Linear;
    cfg.grid.resolution = {201};
  } else if (name == "plane") {
    r.data = example_2d_plane(seed);
    cfg.mean_basis = BasisKind::Linear;
    cfg.grid.resolution = {50, 50};
  } else if (name == "santner") {
    r.data = build_santner_dataset(seed);
    cfg.mean_basis = BasisKind::Constant;
    cfg.grid.resolution = {50, 50};
  } else {
    throw UsageError("unknown demo: " + name);
  }
  r.config = cfg;

  auto [fitted, tr] = center_dataset(r.data);
  r.fitted = std::move(fitted);
  r.transform = tr;
  MeanBasis basis{cfg.mean_basis, static_cast<int>(r.data.p())};
  PriorSpec prior = build_prior(cfg, r.fitted);
  r.trace = run_chain(r.fitted, basis, prior, cfg.mcmc);

  r.grid = make_grid(extended_bounds(r.data, cfg.grid.extend),
                     cfg.grid.resolution);
  PredictionGrid grid_fit = transform_grid(r.grid, tr);

  Rng root(seed);
  Rng pred_rng = root.fork(1);
  JointPredictionResult jp =
      predict_joint(r.trace, r.fitted, grid_fit, pred_rng, r.data.p() == 1);
  r.field = jp.field;
  r.field.grid = r.grid;  // report original coordinates
  r.adjacent_disagreement = jp.adjacent_disagreement;
  if (r.data.p() == 1) {
    if (jp.crossings.empty()) throw NoCrossings();
    BoundarySummary1D b;
    b.per_sample_crossings = jp.crossing_counts;
    const double sc = tr.scale[0], sh = tr.shift[0];
    b.median = quantile_type7(jp.crossings, 0.5) * sc + sh;
    b.lower95 = quantile_type7(jp.crossings, 0.025) * sc + sh;
    b.upper95 = quantile_type7(jp.crossings, 0.975) * sc + sh;
    r.boundary = b;
  }

  r.loo = loo_misclassification(r.trace, r.fitted);

  r.logistic = fit_logistic(r.data);
  r.logistic_field = logistic_prob_field(r.logistic, r.grid);
  Rng bern_rng = root.fork(2);
  r.bernoulli_avg = average_bernoulli(r.logistic_field, 1000, bern_rng);
  r.voronoi_field.resize(r.grid.m());
  for (Eigen::Index g = 0; g < r.grid.m(); ++g)
    r.voronoi_field(g) =
        voronoi_classify(r.data, r.grid.points.row(g).transpose()) ==
                ClassLabel::L1
            ? 1.0
            : 0.0;

  r.summary_json = build_summary(r);
  return r;
}

void write_demo_outputs(const DemoResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto path = [&](const char* f) { return (fs::path(out_dir) / f).string(); };

  write_dataset_csv(path("dataset.csv"), r.data);
  write_trace_jsonl(path("trace.jsonl"), r.trace, r.transform);
  write_field_csv(path("field.csv"), r.grid.points, r.field.prob_r1,
                  r.field.mean_eta);
  if (r.boundary) write_boundary_json(path("boundary.json"), *r.boundary);
  write_loo_csv(path("loo.csv"), r.data.points, r.data, r.loo);

  Eigen::VectorXd logit(r.grid.m());
  for (Eigen::Index g = 0; g < r.grid.m(); ++g) {
    double t = r.logistic.coeffs(0);
    for (Eigen::Index k = 0; k < r.grid.points.cols(); ++k)
      t += r.logistic.coeffs(k + 1) * r.grid.points(g, k);
    logit(g) = t;
  }
  write_field_csv(path("logistic_field.csv"), r.grid.points, r.logistic_field,
                  logit);
  write_field_csv(path("bernoulli_avg.csv"), r.grid.points, r.bernoulli_avg,
                  Eigen::VectorXd::Zero(r.grid.m()));
  write_field_csv(path("voronoi_field.csv"), r.grid.points, r.voronoi_field,
                  Eigen::VectorXd::Zero(r.grid.m()));

  std::ofstream s(path("summary.json"), std::ios::binary);
  s << r.summary_json;
  std::ofstream c(path("run_config.json"), std::ios::binary);
  c << run_config_echo(r.config);
}

}  // namespace gpclass
