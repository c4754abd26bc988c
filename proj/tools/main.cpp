#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gpclass/baselines.hpp"
#include "gpclass/demo.hpp"
#include "gpclass/errors.hpp"
#include "gpclass/io.hpp"
#include "gpclass/mcmc.hpp"
#include "gpclass/predict.hpp"
#include "gpclass/validate.hpp"

namespace {

namespace fs = std::filesystem;
using namespace gpclass;

std::vector<int> parse_grid_spec(const std::string& text) {
  std::vector<int> res;
  std::string cur;
  for (char c : text + "x") {
    if (c == 'x' || c == 'X') {
      if (cur.empty()) throw UsageError("bad --grid spec: " + text);
      try {
        res.push_back(std::stoi(cur));
      } catch (const std::exception&) {
        throw UsageError("bad --grid spec: " + text);
      }
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (res.empty()) throw UsageError("bad --grid spec: " + text);
  return res;
}

std::string out_path(const std::string& dir, const char* name) {
  fs::create_directories(dir);
  return (fs::path(dir) / name).string();
}

std::vector<int> default_resolution(Eigen::Index p,
                                    const std::vector<int>& from_cfg) {
  if (!from_cfg.empty()) return from_cfg;
  if (p == 1) return {201};
  if (p == 2) return {50, 50};
  throw UsageError("no default grid for dimension " + std::to_string(p) +
                   "; pass --grid");
}

// Reconstructs the fit-time coordinates and checks the trace belongs to
// this dataset.
LabelledDataset fitted_for_trace(const TraceFile& tf, const LabelledDataset& d) {
  if (!tf.trace.samples.empty()) {
    const TraceSample& s = tf.trace.samples.front();
    if (s.eta.size() != d.n())
      throw DimensionMismatch("trace eta length vs dataset size");
    if (s.delta.size() != d.p())
      throw DimensionMismatch("trace delta length vs dataset dimension");
  }
  if (!tf.transform) return d;
  auto [fitted, tr] = center_dataset(d);
  if (tr.shift.size() != tf.transform->shift.size() ||
      (tr.shift - tf.transform->shift).cwiseAbs().maxCoeff() > 1e-9 ||
      (tr.scale - tf.transform->scale).cwiseAbs().maxCoeff() > 1e-9)
    throw DataError("trace centering transform does not match the dataset");
  return fitted;
}

PredictionGrid to_fit_coords(const PredictionGrid& g,
                             const std::optional<TransformRecord>& t) {
  if (!t) return g;
  PredictionGrid out = g;
  out.points = apply_transform(g.points, *t);
  for (std::size_t k = 0; k < out.axes.size(); ++k)
    out.axes[k] = ((out.axes[k].array() - t->shift[static_cast<Eigen::Index>(k)]) /
                   t->scale[static_cast<Eigen::Index>(k)])
                      .matrix();
  return out;
}

int cmd_fit(const std::string& data_path, const std::string& config_path,
            const std::string& out_dir, bool seed_given, std::uint64_t seed) {
  LabelledDataset d = load_dataset(data_path);
  RunConfig cfg =
      config_path.empty() ? default_run_config() : load_run_config(config_path);
  if (seed_given) cfg.mcmc.seed = seed;
  validate_config(cfg.mcmc);

  LabelledDataset fitted = d;
  std::optional<TransformRecord> transform;
  if (cfg.center) {
    auto [fd, tr] = center_dataset(d);
    fitted = std::move(fd);
    transform = tr;
  }
  MeanBasis basis{cfg.mean_basis, static_cast<int>(d.p())};
  PriorSpec prior = build_prior(cfg, fitted);
  TraceSet trace = run_chain(fitted, basis, prior, cfg.mcmc);

  write_trace_jsonl(out_path(out_dir, "trace.jsonl"), trace, transform);
  std::ofstream c(out_path(out_dir, "run_config.json"), std::ios::binary);
  c << run_config_echo(cfg);

  std::cout << "retained " << trace.samples.size() << " samples\n";
  std::cout << "accept_sigma2 " << format_double(trace.accept_sigma2) << "\n";
  std::cout << "accept_delta";
  for (Eigen::Index k = 0; k < trace.accept_delta.size(); ++k)
    std::cout << " " << format_double(trace.accept_delta(k));
  std::cout << "\n";
  return 0;
}

int cmd_predict(const std::string& trace_path, const std::string& data_path,
                const std::string& config_path, const std::string& grid_spec,
                const std::string& out_dir, std::uint64_t seed) {
  TraceFile tf = read_trace(trace_path);
  LabelledDataset d = load_dataset(data_path);
  RunConfig cfg =
      config_path.empty() ? default_run_config() : load_run_config(config_path);
  if (!grid_spec.empty()) cfg.grid.resolution = parse_grid_spec(grid_spec);

  LabelledDataset fitted = fitted_for_trace(tf, d);
  std::vector<int> res = default_resolution(d.p(), cfg.grid.resolution);
  if (static_cast<Eigen::Index>(res.size()) != d.p())
    throw UsageError("--grid has " + std::to_string(res.size()) +
                     " axes for " + std::to_string(d.p()) + "-D data");
  PredictionGrid grid = make_grid(extended_bounds(d, cfg.grid.extend), res);
  PredictionGrid grid_fit = to_fit_coords(grid, tf.transform);

  Rng rng = Rng(seed).fork(1);
  JointPredictionResult jp =
      predict_joint(tf.trace, fitted, grid_fit, rng, d.p() == 1);
  write_field_csv(out_path(out_dir, "field.csv"), grid.points,
                  jp.field.prob_r1, jp.field.mean_eta);
  if (d.p() == 1) {
    if (jp.crossings.empty()) throw NoCrossings();
    BoundarySummary1D b;
    b.per_sample_crossings = jp.crossing_counts;
    const double sc = tf.transform ? tf.transform->scale[0] : 1.0;
    const double sh = tf.transform ? tf.transform->shift[0] : 0.0;
    b.median = quantile_type7(jp.crossings, 0.5) * sc + sh;
    b.lower95 = quantile_type7(jp.crossings, 0.025) * sc + sh;
    b.upper95 = quantile_type7(jp.crossings, 0.975) * sc + sh;
    write_boundary_json(out_path(out_dir, "boundary.json"), b);
    std::cout << "boundary median " << format_double(b.median) << " ["
              << format_double(b.lower95) << ", " << format_double(b.upper95)
              << "]\n";
  }
  std::cout << "field over " << grid.m() << " points from "
            << jp.field.samples_used << " samples\n";
  return 0;
}

int cmd_loo(const std::string& trace_path, const std::string& data_path,
            const std::string& out_dir) {
  TraceFile tf = read_trace(trace_path);
  LabelledDataset d = load_dataset(data_path);
  LabelledDataset fitted = fitted_for_trace(tf, d);
  MisclassReport rep = loo_misclassification(tf.trace, fitted);
  write_loo_csv(out_path(out_dir, "loo.csv"), d.points, d, rep);
  Eigen::Index worst = 0;
  rep.rates.maxCoeff(&worst);
  std::cout << "largest rate " << format_double(rep.rates(worst))
            << " at index " << worst << "\n";
  return 0;
}

int cmd_baseline(const std::string& method, const std::string& data_path,
                 const std::string& grid_spec, int samples,
                 const std::string& out_dir, std::uint64_t seed) {
  if (method != "logistic" && method != "voronoi")
    throw UsageError("unknown method: " + method);
  LabelledDataset d = load_dataset(data_path);
  std::vector<int> res = default_resolution(
      d.p(), grid_spec.empty() ? std::vector<int>{} : parse_grid_spec(grid_spec));
  if (static_cast<Eigen::Index>(res.size()) != d.p())
    throw UsageError("--grid axes do not match the data dimension");
  PredictionGrid grid = make_grid(d.bounds, res);

  if (method == "logistic") {
    if (samples < 1) throw UsageError("--samples must be at least 1");
    LogisticModel m = fit_logistic(d);
    Eigen::VectorXd probs = logistic_prob_field(m, grid);
    Eigen::VectorXd logit(grid.m());
    for (Eigen::Index g = 0; g < grid.m(); ++g) {
      double t = m.coeffs(0);
      for (Eigen::Index k = 0; k < grid.points.cols(); ++k)
        t += m.coeffs(k + 1) * grid.points(g, k);
      logit(g) = t;
    }
    write_field_csv(out_path(out_dir, "logistic_field.csv"), grid.points,
                    probs, logit);
    Rng rng = Rng(seed).fork(2);
    Eigen::VectorXd avg = average_bernoulli(probs, samples, rng);
    write_field_csv(out_path(out_dir, "bernoulli_avg.csv"), grid.points, avg,
                    Eigen::VectorXd::Zero(grid.m()));
    std::cout << "logistic converged=" << (m.converged ? "yes" : "no")
              << " perfect_separation=" << (m.perfect_separation ? "yes" : "no")
              << "\n";
  } else {
    Eigen::VectorXd field(grid.m());
    for (Eigen::Index g = 0; g < grid.m(); ++g)
      field(g) = voronoi_classify(d, grid.points.row(g).transpose()) ==
                         ClassLabel::L1
                     ? 1.0
                     : 0.0;
    write_field_csv(out_path(out_dir, "voronoi_field.csv"), grid.points, field,
                    Eigen::VectorXd::Zero(grid.m()));
    std::cout << "voronoi field over " << grid.m() << " points\n";
  }
  return 0;
}

int cmd_demo(const std::string& name, std::uint64_t seed,
             const std::string& out_dir) {
  DemoResult r = run_demo(name, seed);
  const std::string dir =
      out_dir.empty() ? ("gpclass_demo_" + name) : out_dir;
  write_demo_outputs(r, dir);
  std::cout << "demo " << name << " seed " << seed << " -> " << dir << "\n";
  if (r.boundary)
    std::cout << "boundary median " << format_double(r.boundary->median)
              << " [" << format_double(r.boundary->lower95) << ", "
              << format_double(r.boundary->upper95) << "]\n";
  std::cout << "retained " << r.trace.samples.size() << " samples\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"latent-GP classification of labelled computer model output"};
  app.require_subcommand(1);

  std::string data_path, config_path, trace_path, grid_spec, out_dir = "out";
  std::string method = "logistic", demo_name;
  std::uint64_t seed = 0;
  int samples = 1000;

  CLI::App* fit = app.add_subcommand("fit", "run the MCMC sampler");
  fit->add_option("--data", data_path, "dataset CSV")->required();
  fit->add_option("--config", config_path, "run configuration JSON");
  fit->add_option("--out", out_dir, "output directory");
  CLI::Option* fit_seed = fit->add_option("--seed", seed, "chain seed");

  CLI::App* predict = app.add_subcommand("predict", "joint predictive field");
  predict->add_option("--trace", trace_path, "trace JSONL from fit")->required();
  predict->add_option("--data", data_path, "dataset CSV")->required();
  predict->add_option("--config", config_path, "run configuration JSON");
  predict->add_option("--grid", grid_spec, "grid resolution, e.g. 201 or 50x50");
  predict->add_option("--out", out_dir, "output directory");
  predict->add_option("--seed", seed, "prediction stream seed");

  CLI::App* loo = app.add_subcommand("loo", "leave-one-out misclassification");
  loo->add_option("--trace", trace_path, "trace JSONL from fit")->required();
  loo->add_option("--data", data_path, "dataset CSV")->required();
  loo->add_option("--out", out_dir, "output directory");

  CLI::App* baseline = app.add_subcommand("baseline", "comparator fields");
  baseline->add_option("--method", method, "logistic or voronoi")->required();
  baseline->add_option("--data", data_path, "dataset CSV")->required();
  baseline->add_option("--grid", grid_spec, "grid resolution");
  baseline->add_option("--samples", samples, "Bernoulli fields to average");
  baseline->add_option("--out", out_dir, "output directory");
  baseline->add_option("--seed", seed, "sampling seed");

  CLI::App* demo = app.add_subcommand("demo", "run a built-in example");
  demo->add_option("name", demo_name, "oned, plane or santner")->required();
  demo->add_option("--seed", seed, "demo seed");
  CLI::Option* demo_out = demo->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    if (fit->parsed())
      return cmd_fit(data_path, config_path, out_dir, fit_seed->count() > 0,
                     seed);
    if (predict->parsed())
      return cmd_predict(trace_path, data_path, config_path, grid_spec,
                         out_dir, seed);
    if (loo->parsed()) return cmd_loo(trace_path, data_path, out_dir);
    if (baseline->parsed())
      return cmd_baseline(method, data_path, grid_spec, samples, out_dir, seed);
    if (demo->parsed())
      return cmd_demo(demo_name, seed,
                      demo_out->count() > 0 ? out_dir : std::string{});
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
