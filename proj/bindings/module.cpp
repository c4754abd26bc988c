#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gpclass/baselines.hpp"
#include "gpclass/dataset.hpp"
#include "gpclass/demo.hpp"
#include "gpclass/errors.hpp"
#include "gpclass/io.hpp"
#include "gpclass/mcmc.hpp"
#include "gpclass/predict.hpp"
#include "gpclass/testbed.hpp"
#include "gpclass/validate.hpp"

namespace py = pybind11;
using namespace gpclass;

namespace {

using Bounds = std::vector<std::pair<double, double>>;

// Bounds default to the per-axis data range when not given explicitly.
LabelledDataset make_dataset(Eigen::MatrixXd points,
                             const std::vector<std::string>& labels,
                             const std::optional<Bounds>& bounds) {
  LabelledDataset d;
  d.points = std::move(points);
  d.labels.reserve(labels.size());
  for (const std::string& s : labels) d.labels.push_back(parse_label(s));
  if (bounds) {
    d.bounds = *bounds;
  } else if (d.points.rows() > 0) {
    for (Eigen::Index k = 0; k < d.points.cols(); ++k)
      d.bounds.emplace_back(d.points.col(k).minCoeff(),
                            d.points.col(k).maxCoeff());
  }
  validate_dataset(d);
  return d;
}

py::list label_list(const std::vector<ClassLabel>& labels) {
  py::list out;
  for (ClassLabel l : labels) out.append(label_name(l));
  return out;
}

py::dict dataset_dict(const LabelledDataset& d) {
  py::dict out;
  out["points"] = d.points;
  out["labels"] = label_list(d.labels);
  out["bounds"] = d.bounds;
  return out;
}

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

// Fitted chain plus everything needed to predict in original units.
struct Fit {
  LabelledDataset data;    // original units
  LabelledDataset fitted;  // chain coordinates
  std::optional<TransformRecord> transform;
  TraceSet trace;

  PredictionGrid to_chain(const PredictionGrid& g) const {
    return transform ? transform_grid(g, *transform) : g;
  }
};

Fit fit_model(Eigen::MatrixXd points, const std::vector<std::string>& labels,
              const std::optional<Bounds>& bounds, const std::string& basis,
              bool center, int iterations, int burnin, int thin,
              std::uint64_t seed, int gibbs_sweeps_per_iter,
              double mh_step_sigma2, double mh_step_delta, bool adapt) {
  Fit f;
  f.data = make_dataset(std::move(points), labels, bounds);
  if (center) {
    auto [fitted, tr] = center_dataset(f.data);
    f.fitted = std::move(fitted);
    f.transform = tr;
  } else {
    f.fitted = f.data;
  }
  MeanBasis mb{parse_basis(basis), static_cast<int>(f.data.p())};
  RunConfig rc = default_run_config();
  rc.mean_basis = mb.kind;
  rc.center = center;
  PriorSpec prior = build_prior(rc, f.fitted);
  McmcConfig cfg;
  cfg.iterations = iterations;
  cfg.burnin = burnin;
  cfg.thin = thin;
  cfg.seed = seed;
  cfg.gibbs_sweeps_per_iter = gibbs_sweeps_per_iter;
  cfg.mh_step_sigma2 = mh_step_sigma2;
  cfg.mh_step_delta = mh_step_delta;
  cfg.adapt = adapt;
  validate_config(cfg);
  {
    py::gil_scoped_release nogil;
    f.trace = run_chain(f.fitted, mb, prior, cfg);
  }
  return f;
}

py::dict fit_samples(const Fit& f) {
  const auto& ss = f.trace.samples;
  if (ss.empty()) throw EmptyTrace();
  const Eigen::Index k = static_cast<Eigen::Index>(ss.size());
  Eigen::VectorXi iters(k);
  Eigen::MatrixXd beta(k, ss.front().beta.size());
  Eigen::VectorXd sigma2(k);
  Eigen::MatrixXd delta(k, ss.front().delta.size());
  Eigen::MatrixXd eta(k, ss.front().eta.size());
  for (Eigen::Index i = 0; i < k; ++i) {
    iters(i) = ss[i].iter;
    beta.row(i) = ss[i].beta.transpose();
    sigma2(i) = ss[i].sigma2;
    delta.row(i) = ss[i].delta.transpose();
    eta.row(i) = ss[i].eta.transpose();
  }
  py::dict out;
  out["iter"] = iters;
  out["beta"] = beta;
  out["sigma2"] = sigma2;
  out["delta"] = delta;
  out["eta"] = eta;
  return out;
}

py::dict field_dict(const PredictionGrid& grid, const ProbabilityField& f) {
  py::dict out;
  out["points"] = grid.points;
  out["prob_r1"] = f.prob_r1;
  out["mean_eta"] = f.mean_eta;
  out["samples_used"] = f.samples_used;
  return out;
}

py::dict fit_predict(const Fit& f, const std::vector<int>& resolution,
                     double extend, std::uint64_t seed) {
  PredictionGrid grid = make_grid(extended_bounds(f.data, extend), resolution);
  PredictionGrid chain_grid = f.to_chain(grid);
  JointPredictionResult jp;
  {
    py::gil_scoped_release nogil;
    Rng root(seed);
    Rng pred = root.fork(1);
    jp = predict_joint(f.trace, f.fitted, chain_grid, pred, f.data.p() == 1);
  }
  py::dict out = field_dict(grid, jp.field);
  out["adjacent_disagreement"] = jp.adjacent_disagreement >= 0.0
                                     ? py::cast(jp.adjacent_disagreement)
                                     : py::none();
  if (f.data.p() == 1) {
    if (jp.crossings.empty()) throw NoCrossings();
    const double sc = f.transform ? f.transform->scale[0] : 1.0;
    const double sh = f.transform ? f.transform->shift[0] : 0.0;
    BoundarySummary1D b;
    b.per_sample_crossings = jp.crossing_counts;
    b.median = quantile_type7(jp.crossings, 0.5) * sc + sh;
    b.lower95 = quantile_type7(jp.crossings, 0.025) * sc + sh;
    b.upper95 = quantile_type7(jp.crossings, 0.975) * sc + sh;
    py::dict bd;
    bd["median"] = b.median;
    bd["lower95"] = b.lower95;
    bd["upper95"] = b.upper95;
    bd["excluded_draws"] = b.excluded_draws();
    out["boundary"] = bd;
  } else {
    out["boundary"] = py::none();
  }
  return out;
}

py::dict fit_predict_points(const Fit& f, Eigen::MatrixXd points,
                            std::uint64_t seed) {
  if (points.cols() != f.data.p())
    throw DimensionMismatch("dimension mismatch: query points have " +
                            std::to_string(points.cols()) +
                            " columns, model has " +
                            std::to_string(f.data.p()));
  PredictionGrid grid = grid_from_points(std::move(points));
  PredictionGrid chain_grid = f.to_chain(grid);
  JointPredictionResult jp;
  {
    py::gil_scoped_release nogil;
    Rng root(seed);
    Rng pred = root.fork(1);
    jp = predict_joint(f.trace, f.fitted, chain_grid, pred, false);
  }
  return field_dict(grid, jp.field);
}

Eigen::VectorXd fit_mean_surface(const Fit& f, Eigen::MatrixXd points) {
  if (points.cols() != f.data.p())
    throw DimensionMismatch("dimension mismatch: query points have " +
                            std::to_string(points.cols()) +
                            " columns, model has " +
                            std::to_string(f.data.p()));
  PredictionGrid grid = f.to_chain(grid_from_points(std::move(points)));
  py::gil_scoped_release nogil;
  return posterior_mean_surface(f.trace, f.fitted, grid);
}

py::dict fit_loo(const Fit& f) {
  MisclassReport rep;
  {
    py::gil_scoped_release nogil;
    rep = loo_misclassification(f.trace, f.fitted);
  }
  py::dict out;
  out["indices"] = rep.indices;
  out["labels"] = label_list(rep.labels);
  out["rates"] = rep.rates;
  return out;
}

py::dict logistic_dict(const LogisticModel& m) {
  py::dict out;
  out["coeffs"] = m.coeffs;
  out["converged"] = m.converged;
  out["iterations"] = m.iterations;
  out["perfect_separation"] = m.perfect_separation;
  return out;
}

std::string demo_summary(const std::string& name, std::uint64_t seed,
                         const std::optional<std::string>& out_dir,
                         std::optional<int> iterations,
                         std::optional<int> burnin, std::optional<int> thin) {
  McmcConfig cfg;
  cfg.seed = seed;
  if (iterations) cfg.iterations = *iterations;
  if (burnin) cfg.burnin = *burnin;
  if (thin) cfg.thin = *thin;
  validate_config(cfg);
  DemoResult r;
  {
    py::gil_scoped_release nogil;
    r = run_demo(name, seed, cfg);
    if (out_dir) write_demo_outputs(r, *out_dir);
  }
  return r.summary_json;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core for the gpclass package.";
  m.attr("__version__") = "0.1.0";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const UsageError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const DataError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const NumericalError& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  py::class_<Fit>(m, "Fit",
                  "Fitted latent-process classifier. Construct with fit().")
      .def_property_readonly(
          "n", [](const Fit& f) { return static_cast<int>(f.data.n()); })
      .def_property_readonly(
          "p", [](const Fit& f) { return static_cast<int>(f.data.p()); })
      .def_property_readonly(
          "basis", [](const Fit& f) { return basis_name(f.trace.basis); })
      .def_property_readonly(
          "centered", [](const Fit& f) { return f.transform.has_value(); })
      .def_property_readonly(
          "shift",
          [](const Fit& f) -> py::object {
            return f.transform ? py::cast(f.transform->shift) : py::none();
          })
      .def_property_readonly(
          "scale",
          [](const Fit& f) -> py::object {
            return f.transform ? py::cast(f.transform->scale) : py::none();
          })
      .def_property_readonly(
          "accept_sigma2", [](const Fit& f) { return f.trace.accept_sigma2; })
      .def_property_readonly(
          "accept_delta", [](const Fit& f) { return f.trace.accept_delta; })
      .def("samples", &fit_samples,
           "Retained posterior draws as arrays keyed iter, beta, sigma2, "
           "delta, eta.")
      .def("predict", &fit_predict, py::arg("resolution"),
           py::arg("extend") = 0.0, py::arg("seed") = 0,
           "Joint predictive classification over a tensor grid in original "
           "units. Returns points, prob_r1, mean_eta, samples_used, "
           "adjacent_disagreement and, for 1-D models, the boundary "
           "summary. The seed stream matches the command line tool.")
      .def("predict_points", &fit_predict_points, py::arg("points"),
           py::arg("seed") = 0,
           "Joint predictive classification at arbitrary points.")
      .def("mean_surface", &fit_mean_surface, py::arg("points"),
           "Posterior mean of the latent process at the given points.")
      .def("loo", &fit_loo,
           "Leave-one-out misclassification rates for the training points.");

  m.def("fit", &fit_model, py::arg("points"), py::arg("labels"),
        py::arg("bounds") = py::none(), py::kw_only(),
        py::arg("basis") = "linear", py::arg("center") = true,
        py::arg("iterations") = 10000, py::arg("burnin") = 5000,
        py::arg("thin") = 5, py::arg("seed") = 0,
        py::arg("gibbs_sweeps_per_iter") = 1, py::arg("mh_step_sigma2") = 0.5,
        py::arg("mh_step_delta") = 0.5, py::arg("adapt") = true,
        "Run the MCMC sampler on labelled points and return a Fit. Labels "
        "are the strings l1 and l2; bounds default to the data range.");

  m.def(
      "fit_logistic",
      [](Eigen::MatrixXd points, const std::vector<std::string>& labels,
         const std::optional<Bounds>& bounds) {
        LabelledDataset d = make_dataset(std::move(points), labels, bounds);
        LogisticModel mdl;
        {
          py::gil_scoped_release nogil;
          mdl = fit_logistic(d);
        }
        return logistic_dict(mdl);
      },
      py::arg("points"), py::arg("labels"), py::arg("bounds") = py::none(),
      "Maximum-likelihood logistic baseline. Returns coeffs, converged, "
      "iterations, perfect_separation.");

  m.def(
      "logistic_probs",
      [](const Eigen::VectorXd& coeffs, Eigen::MatrixXd points) {
        if (coeffs.size() != points.cols() + 1)
          throw DimensionMismatch(
              "dimension mismatch: expected " +
              std::to_string(points.cols() + 1) + " coefficients, got " +
              std::to_string(coeffs.size()));
        LogisticModel mdl;
        mdl.coeffs = coeffs;
        return logistic_prob_field(mdl, grid_from_points(std::move(points)));
      },
      py::arg("coeffs"), py::arg("points"),
      "Probability of the first region under a fitted logistic model.");

  m.def(
      "average_bernoulli",
      [](const Eigen::VectorXd& probs, int count, std::uint64_t seed) {
        Rng rng(seed);
        py::gil_scoped_release nogil;
        return average_bernoulli(probs, count, rng);
      },
      py::arg("probs"), py::arg("count"), py::arg("seed") = 0,
      "Average of independent Bernoulli label fields drawn at the given "
      "probabilities.");

  m.def(
      "bernoulli_sample",
      [](const Eigen::VectorXd& probs, std::uint64_t seed) {
        Rng rng(seed);
        return label_list(bernoulli_field_sample(probs, rng));
      },
      py::arg("probs"), py::arg("seed") = 0,
      "One independent Bernoulli label field.");

  m.def(
      "voronoi_labels",
      [](Eigen::MatrixXd points, const std::vector<std::string>& labels,
         const Eigen::MatrixXd& queries,
         const std::optional<Bounds>& bounds) {
        LabelledDataset d = make_dataset(std::move(points), labels, bounds);
        if (queries.cols() != d.p())
          throw DimensionMismatch("dimension mismatch: query points have " +
                                  std::to_string(queries.cols()) +
                                  " columns, data has " +
                                  std::to_string(d.p()));
        std::vector<ClassLabel> out;
        out.reserve(static_cast<std::size_t>(queries.rows()));
        for (Eigen::Index i = 0; i < queries.rows(); ++i)
          out.push_back(voronoi_classify(d, queries.row(i).transpose()));
        return label_list(out);
      },
      py::arg("points"), py::arg("labels"), py::arg("queries"),
      py::arg("bounds") = py::none(),
      "Nearest-neighbor labels of the query points.");

  m.def(
      "maximin_lhs",
      [](int n, const Bounds& bounds, int restarts, std::uint64_t seed) {
        Rng rng(seed);
        py::gil_scoped_release nogil;
        return maximin_lhs(n, bounds, restarts, rng);
      },
      py::arg("n"), py::arg("bounds"), py::arg("restarts") = 50,
      py::arg("seed") = 0,
      "Best-of-restarts maximin Latin hypercube over the given bounds.");

  m.def(
      "example_1d", [] { return dataset_dict(example_1d()); },
      "Twelve fixed 1-D points on [0, 20].");
  m.def(
      "example_2d_plane",
      [](std::uint64_t seed) { return dataset_dict(example_2d_plane(seed)); },
      py::arg("seed") = 0, "20-point LHS labelled by the plane x1 = 3.");
  m.def(
      "santner_dataset",
      [](std::uint64_t seed) {
        return dataset_dict(build_santner_dataset(seed));
      },
      py::arg("seed") = 0, "50-point maximin design labelled by the annulus.");

  m.def(
      "load_dataset",
      [](const std::string& path) { return dataset_dict(load_dataset(path)); },
      py::arg("path"), "Read a labelled dataset CSV (x1,...,xp,label).");

  m.def("run_demo", &demo_summary, py::arg("name"), py::arg("seed") = 0,
        py::kw_only(), py::arg("out_dir") = py::none(),
        py::arg("iterations") = py::none(), py::arg("burnin") = py::none(),
        py::arg("thin") = py::none(),
        "Run a built-in example end to end and return its summary JSON. "
        "Known names: oned, plane, santner. With out_dir, also write the "
        "full output file set.");
}
