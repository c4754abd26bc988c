#include "gpclass/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gpclass/errors.hpp"
#include "json.hpp"

namespace gpclass {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open for writing: " + path);
  return f;
}

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd json_to_vec(const json& a) {
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i].get<double>();
  return v;
}

json prior_to_json(const PriorSpec& prior) {
  json j;
  j["beta_mean"] = vec_to_json(prior.beta_mean);
  j["beta_var"] = vec_to_json(prior.beta_var);
  j["sigma2_shape"] = prior.sigma2_shape;
  j["sigma2_scale"] = prior.sigma2_scale;
  j["delta_shape"] = prior.delta_shape;
  j["delta_scale"] = vec_to_json(prior.delta_scale);
  j["tight_intercept"] = prior.tight_intercept;
  return j;
}

PriorSpec prior_from_json(const json& j) {
  PriorSpec p;
  p.beta_mean = json_to_vec(j.at("beta_mean"));
  p.beta_var = json_to_vec(j.at("beta_var"));
  p.sigma2_shape = j.at("sigma2_shape").get<double>();
  p.sigma2_scale = j.at("sigma2_scale").get<double>();
  p.delta_shape = j.at("delta_shape").get<double>();
  p.delta_scale = json_to_vec(j.at("delta_scale"));
  p.tight_intercept = j.at("tight_intercept").get<bool>();
  return p;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_dataset_csv(const std::string& path, const LabelledDataset& d) {
  std::ofstream f = open_out(path);
  for (Eigen::Index k = 0; k < d.p(); ++k) f << "x" << (k + 1) << ",";
  f << "label\n";
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    for (Eigen::Index k = 0; k < d.p(); ++k)
      f << format_double(d.points(i, k)) << ",";
    f << label_name(d.labels[static_cast<std::size_t>(i)]) << "\n";
  }
}

void write_field_csv(const std::string& path, const Eigen::MatrixXd& points,
                     const Eigen::VectorXd& prob_r1,
                     const Eigen::VectorXd& mean_eta) {
  if (points.rows() != prob_r1.size() || points.rows() != mean_eta.size())
    throw DimensionMismatch("field columns do not match the grid");
  std::ofstream f = open_out(path);
  for (Eigen::Index k = 0; k < points.cols(); ++k) f << "x" << (k + 1) << ",";
  f << "prob_r1,mean_eta\n";
  for (Eigen::Index j = 0; j < points.rows(); ++j) {
    for (Eigen::Index k = 0; k < points.cols(); ++k)
      f << format_double(points(j, k)) << ",";
    f << format_double(prob_r1(j)) << "," << format_double(mean_eta(j))
      << "\n";
  }
}

void write_loo_csv(const std::string& path, const Eigen::MatrixXd& points,
                   const LabelledDataset& d, const MisclassReport& rep) {
  if (points.rows() != d.n() || rep.rates.size() != d.n())
    throw DimensionMismatch("misclassification report does not match data");
  std::ofstream f = open_out(path);
  f << "index,";
  for (Eigen::Index k = 0; k < points.cols(); ++k) f << "x" << (k + 1) << ",";
  f << "label,misclass_rate\n";
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    f << rep.indices[static_cast<std::size_t>(i)] << ",";
    for (Eigen::Index k = 0; k < points.cols(); ++k)
      f << format_double(points(i, k)) << ",";
    f << label_name(d.labels[static_cast<std::size_t>(i)]) << ","
      << format_double(rep.rates(i)) << "\n";
  }
}

void write_boundary_json(const std::string& path, const BoundarySummary1D& b) {
  json j;
  j["median"] = b.median;
  j["lower95"] = b.lower95;
  j["upper95"] = b.upper95;
  j["excluded_draws"] = b.excluded_draws();
  std::ofstream f = open_out(path);
  f << j.dump(2) << "\n";
}

void write_trace_jsonl(const std::string& path, const TraceSet& trace,
                       const std::optional<TransformRecord>& transform) {
  std::ofstream f = open_out(path);
  json h;
  h["type"] = "config";
  h["basis"] = basis_name(trace.basis);
  h["centered"] = transform.has_value();
  if (transform) {
    h["shift"] = vec_to_json(transform->shift);
    h["scale"] = vec_to_json(transform->scale);
  }
  h["iterations"] = trace.config.iterations;
  h["burnin"] = trace.config.burnin;
  h["thin"] = trace.config.thin;
  h["seed"] = trace.config.seed;
  h["gibbs_sweeps_per_iter"] = trace.config.gibbs_sweeps_per_iter;
  h["mh_step_sigma2"] = trace.config.mh_step_sigma2;
  h["mh_step_delta"] = trace.config.mh_step_delta;
  h["adapt"] = trace.config.adapt;
  h["accept_sigma2"] = trace.accept_sigma2;
  h["accept_delta"] = vec_to_json(trace.accept_delta);
  h["prior"] = prior_to_json(trace.prior);
  f << h.dump() << "\n";
  for (const TraceSample& s : trace.samples) {
    json j;
    j["iter"] = s.iter;
    j["beta"] = vec_to_json(s.beta);
    j["sigma2"] = s.sigma2;
    j["delta"] = vec_to_json(s.delta);
    j["eta"] = vec_to_json(s.eta);
    f << j.dump() << "\n";
  }
}

TraceFile read_trace(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw MissingFile(path);
  TraceFile out;
  TraceSet& t = out.trace;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      if (lineno == 1) {
        if (j.value("type", "") != "config")
          throw DataError("trace header missing");
        t.basis = parse_basis(j.at("basis").get<std::string>());
        t.config.iterations = j.at("iterations").get<int>();
        t.config.burnin = j.at("burnin").get<int>();
        t.config.thin = j.at("thin").get<int>();
        t.config.seed = j.at("seed").get<std::uint64_t>();
        t.config.gibbs_sweeps_per_iter = j.at("gibbs_sweeps_per_iter").get<int>();
        t.config.mh_step_sigma2 = j.at("mh_step_sigma2").get<double>();
        t.config.mh_step_delta = j.at("mh_step_delta").get<double>();
        t.config.adapt = j.at("adapt").get<bool>();
        t.accept_sigma2 = j.at("accept_sigma2").get<double>();
        t.accept_delta = json_to_vec(j.at("accept_delta"));
        t.prior = prior_from_json(j.at("prior"));
        if (j.value("centered", false)) {
          TransformRecord tr;
          tr.shift = json_to_vec(j.at("shift"));
          tr.scale = json_to_vec(j.at("scale"));
          out.transform = tr;
        }
      } else {
        TraceSample s;
        s.iter = j.at("iter").get<int>();
        s.beta = json_to_vec(j.at("beta"));
        s.sigma2 = j.at("sigma2").get<double>();
        s.delta = json_to_vec(j.at("delta"));
        s.eta = json_to_vec(j.at("eta"));
        t.samples.push_back(std::move(s));
      }
    } catch (const json::exception& e) {
      throw MalformedRow(path, lineno, e.what());
    }
  }
  if (lineno == 0) throw DataError("trace file is empty: " + path);
  return out;
}

RunConfig default_run_config() { return RunConfig{}; }

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw MissingFile(path);
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config parse error: ") + e.what());
  }
  RunConfig cfg = default_run_config();
  try {
    if (j.contains("mean_basis"))
      cfg.mean_basis = parse_basis(j.at("mean_basis").get<std::string>());
    cfg.center = j.value("center", cfg.center);
    if (j.contains("mcmc")) {
      const json& m = j.at("mcmc");
      cfg.mcmc.iterations = m.value("iterations", cfg.mcmc.iterations);
      cfg.mcmc.burnin = m.value("burnin", cfg.mcmc.burnin);
      cfg.mcmc.thin = m.value("thin", cfg.mcmc.thin);
      cfg.mcmc.seed = m.value("seed", cfg.mcmc.seed);
      cfg.mcmc.gibbs_sweeps_per_iter =
          m.value("gibbs_sweeps_per_iter", cfg.mcmc.gibbs_sweeps_per_iter);
      cfg.mcmc.mh_step_sigma2 = m.value("mh_step_sigma2", cfg.mcmc.mh_step_sigma2);
      cfg.mcmc.mh_step_delta = m.value("mh_step_delta", cfg.mcmc.mh_step_delta);
      cfg.mcmc.adapt = m.value("adapt", cfg.mcmc.adapt);
    }
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      if (g.contains("resolution"))
        cfg.grid.resolution = g.at("resolution").get<std::vector<int>>();
      cfg.grid.extend = g.value("extend", cfg.grid.extend);
    }
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    if (j.contains("prior")) {
      const json& p = j.at("prior");
      if (p.contains("sigma2_shape")) cfg.sigma2_shape = p.at("sigma2_shape").get<double>();
      if (p.contains("sigma2_scale")) cfg.sigma2_scale = p.at("sigma2_scale").get<double>();
      if (p.contains("delta_shape")) cfg.delta_shape = p.at("delta_shape").get<double>();
      if (p.contains("delta_scale"))
        cfg.delta_scale = p.at("delta_scale").get<std::vector<double>>();
      if (p.contains("beta_mean"))
        cfg.beta_mean = p.at("beta_mean").get<std::vector<double>>();
      if (p.contains("beta_var"))
        cfg.beta_var = p.at("beta_var").get<std::vector<double>>();
      if (p.contains("tight_intercept"))
        cfg.tight_intercept = p.at("tight_intercept").get<bool>();
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config field error: ") + e.what());
  }
  return cfg;
}

std::string run_config_echo(const RunConfig& cfg) {
  json j;
  j["mean_basis"] = basis_name(cfg.mean_basis);
  j["center"] = cfg.center;
  json m;
  m["iterations"] = cfg.mcmc.iterations;
  m["burnin"] = cfg.mcmc.burnin;
  m["thin"] = cfg.mcmc.thin;
  m["seed"] = cfg.mcmc.seed;
  m["gibbs_sweeps_per_iter"] = cfg.mcmc.gibbs_sweeps_per_iter;
  m["mh_step_sigma2"] = cfg.mcmc.mh_step_sigma2;
  m["mh_step_delta"] = cfg.mcmc.mh_step_delta;
  m["adapt"] = cfg.mcmc.adapt;
  j["mcmc"] = m;
  json g;
  g["resolution"] = cfg.grid.resolution;
  g["extend"] = cfg.grid.extend;
  j["grid"] = g;
  j["output_dir"] = cfg.output_dir;
  json p = json::object();
  if (cfg.sigma2_shape) p["sigma2_shape"] = *cfg.sigma2_shape;
  if (cfg.sigma2_scale) p["sigma2_scale"] = *cfg.sigma2_scale;
  if (cfg.delta_shape) p["delta_shape"] = *cfg.delta_shape;
  if (cfg.delta_scale) p["delta_scale"] = *cfg.delta_scale;
  if (cfg.beta_mean) p["beta_mean"] = *cfg.beta_mean;
  if (cfg.beta_var) p["beta_var"] = *cfg.beta_var;
  if (cfg.tight_intercept) p["tight_intercept"] = *cfg.tight_intercept;
  if (!p.empty()) j["prior"] = p;
  return j.dump(2) + "\n";
}

PriorSpec build_prior(const RunConfig& cfg, const LabelledDataset& d) {
  MeanBasis basis{cfg.mean_basis, static_cast<int>(d.p())};
  const bool tight =
      cfg.tight_intercept.value_or(d.transform.has_value());
  PriorSpec prior = default_prior(d, basis, tight);
  if (cfg.sigma2_shape) prior.sigma2_shape = *cfg.sigma2_shape;
  if (cfg.sigma2_scale) prior.sigma2_scale = *cfg.sigma2_scale;
  if (cfg.delta_shape) prior.delta_shape = *cfg.delta_shape;
  if (cfg.delta_scale) {
    if (static_cast<Eigen::Index>(cfg.delta_scale->size()) != d.p())
      throw UsageError("prior delta_scale length must equal the input dimension");
    prior.delta_scale = Eigen::Map<const Eigen::VectorXd>(
        cfg.delta_scale->data(), static_cast<Eigen::Index>(cfg.delta_scale->size()));
  }
  if (cfg.beta_mean) {
    if (static_cast<int>(cfg.beta_mean->size()) != basis.q())
      throw UsageError("prior beta_mean length must equal the basis size");
    prior.beta_mean = Eigen::Map<const Eigen::VectorXd>(
        cfg.beta_mean->data(), static_cast<Eigen::Index>(cfg.beta_mean->size()));
  }
  if (cfg.beta_var) {
    if (static_cast<int>(cfg.beta_var->size()) != basis.q())
      throw UsageError("prior beta_var length must equal the basis size");
    prior.beta_var = Eigen::Map<const Eigen::VectorXd>(
        cfg.beta_var->data(), static_cast<Eigen::Index>(cfg.beta_var->size()));
  }
  validate_prior(prior, basis.q(), static_cast<int>(d.p()));
  return prior;
}

std::vector<std::pair<double, double>> extended_bounds(
    const LabelledDataset& d, double extend) {
  if (extend < 0.0) throw UsageError("grid extension must be non-negative");
  std::vector<std::pair<double, double>> out;
  out.reserve(d.bounds.size());
  for (const auto& [lo, hi] : d.bounds) {
    const double r = hi - lo;
    out.emplace_back(lo - extend * r, hi + extend * r);
  }
  return out;
}

}  // namespace gpclass
