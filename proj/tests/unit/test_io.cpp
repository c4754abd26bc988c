#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "gpclass/dataset.hpp"
#include "gpclass/errors.hpp"
#include "gpclass/io.hpp"
#include "gpclass/mcmc.hpp"
#include "json.hpp"

using namespace gpclass;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Scratch directory wiped when the test case ends.
struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() /
          ("gpclass_io_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(bool(f));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line)) lines.push_back(line);
  return lines;
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  f << body;
}

LabelledDataset small_dataset() {
  LabelledDataset d;
  d.points.resize(4, 2);
  d.points << 0.0, 1.5,
              0.25, -0.75,
              1.0, 0.125,
              0.6, 2.0;
  d.labels = {ClassLabel::L1, ClassLabel::L1, ClassLabel::L2, ClassLabel::L2};
  d.bounds = {{0.0, 1.0}, {-1.0, 2.0}};
  return d;
}

TraceSet small_trace() {
  TraceSet t;
  t.basis = BasisKind::Linear;
  t.config.iterations = 40;
  t.config.burnin = 20;
  t.config.thin = 5;
  t.config.seed = 99;
  t.config.gibbs_sweeps_per_iter = 2;
  t.config.mh_step_sigma2 = 0.31;
  t.config.mh_step_delta = 0.47;
  t.config.adapt = false;
  t.accept_sigma2 = 0.28;
  t.accept_delta = Eigen::Vector2d(0.3, 0.1 + 0.2);
  t.prior.beta_mean = Eigen::Vector3d(0.0, -0.5, 1.0 / 3.0);
  t.prior.beta_var = Eigen::Vector3d(0.25, 100.0, 100.0);
  t.prior.sigma2_shape = 3.0;
  t.prior.sigma2_scale = 4.0;
  t.prior.delta_shape = 3.0;
  t.prior.delta_scale = Eigen::Vector2d(0.5, 4.5);
  t.prior.tight_intercept = true;
  TraceSample a;
  a.iter = 25;
  a.eta = Eigen::Vector3d(-0.4, 0.7, 1.0e-17);
  a.beta = Eigen::Vector3d(0.1, -2.0, 0.0);
  a.sigma2 = 1.75;
  a.delta = Eigen::Vector2d(1.0, 8.0);
  TraceSample b;
  b.iter = 30;
  b.eta = Eigen::Vector3d(-1.0e300, 0.1, 2.0);
  b.beta = Eigen::Vector3d(-0.3, 0.6, 5.0e-324);
  b.sigma2 = 0.02;
  b.delta = Eigen::Vector2d(2.5, 0.125);
  t.samples = {a, b};
  return t;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("format_double round trips through text bitwise") {
  const double cases[] = {0.0,
                          -0.0,
                          1.0,
                          0.1,
                          -0.1,
                          1.0 / 3.0,
                          123456789.123456789,
                          1.0e-300,
                          -2.5e300,
                          5.0e-324,
                          std::numeric_limits<double>::max(),
                          std::numeric_limits<double>::min(),
                          1.0 + std::numeric_limits<double>::epsilon()};
  for (double v : cases) {
    const std::string s = format_double(v);
    // strtod, not stod: stod raises out_of_range on subnormal results.
    const double back = std::strtod(s.c_str(), nullptr);
    CAPTURE(s);
    CHECK(back == v);
    CHECK(std::signbit(back) == std::signbit(v));
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-3.0) == "-3");
  CHECK(format_double(0.0) == "0");
}

TEST_CASE("dataset csv writes the pinned header and round trips") {
  TempDir tmp;
  const LabelledDataset d = small_dataset();
  const std::string path = tmp.path("data.csv");
  write_dataset_csv(path, d);

  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "x1,x2,label");
  CHECK(lines[1] == "0,1.5,l1");
  CHECK(lines[3] == "1,0.125,l2");

  LabelledDataset back = load_dataset(path);
  back.bounds = d.bounds;
  REQUIRE(back.n() == d.n());
  REQUIRE(back.p() == d.p());
  CHECK((back.points.array() == d.points.array()).all());
  CHECK(back.labels == d.labels);

  LabelledDataset fixed = load_dataset(path, 2);
  CHECK((fixed.points.array() == d.points.array()).all());
}

TEST_CASE("field csv layout and size guard") {
  TempDir tmp;
  Eigen::MatrixXd pts(3, 2);
  pts << 0.0, 0.0, 0.5, 1.0, 1.0, 2.0;
  Eigen::Vector3d prob(0.125, 0.5, 1.0);
  Eigen::Vector3d mean(-1.5, 0.0, 2.25);
  const std::string path = tmp.path("field.csv");
  write_field_csv(path, pts, prob, mean);

  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "x1,x2,prob_r1,mean_eta");
  CHECK(lines[1] == "0,0,0.125,-1.5");
  CHECK(lines[2] == "0.5,1,0.5,0");
  CHECK(lines[3] == "1,2,1,2.25");

  Eigen::Vector2d shortProb(0.1, 0.2);
  CHECK_THROWS_AS(write_field_csv(tmp.path("bad.csv"), pts, shortProb, mean),
                  DimensionMismatch);
  CHECK_THROWS_AS(write_field_csv(tmp.path("bad.csv"), pts, prob, shortProb),
                  DimensionMismatch);
}

TEST_CASE("loo csv layout and size guard") {
  TempDir tmp;
  const LabelledDataset d = small_dataset();
  MisclassReport rep;
  rep.indices = {0, 1, 2, 3};
  rep.labels = d.labels;
  rep.rates = Eigen::Vector4d(0.25, 0.0625, 0.5, 0.015625);
  const std::string path = tmp.path("loo.csv");
  write_loo_csv(path, d.points, d, rep);

  const auto lines = read_lines(path);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "index,x1,x2,label,misclass_rate");
  CHECK(lines[1] == "0,0,1.5,l1,0.25");
  CHECK(lines[4] == "3,0.6,2,l2,0.015625");

  MisclassReport shortRep = rep;
  shortRep.rates = Eigen::Vector3d(0.1, 0.2, 0.3);
  CHECK_THROWS_AS(write_loo_csv(tmp.path("bad.csv"), d.points, d, shortRep),
                  DimensionMismatch);
}

TEST_CASE("boundary json carries the summary and the excluded count") {
  TempDir tmp;
  BoundarySummary1D b;
  b.median = 7.9375;
  b.lower95 = 6.5;
  b.upper95 = 9.25;
  b.per_sample_crossings = {1, 1, 2, 0, 1, 3};
  REQUIRE(b.excluded_draws() == 3);

  const std::string path = tmp.path("boundary.json");
  write_boundary_json(path, b);

  std::ifstream f(path, std::ios::binary);
  const json j = json::parse(f);
  REQUIRE(j.is_object());
  CHECK(j.size() == 4);
  CHECK(j.at("median").get<double>() == 7.9375);
  CHECK(j.at("lower95").get<double>() == 6.5);
  CHECK(j.at("upper95").get<double>() == 9.25);
  CHECK(j.at("excluded_draws").get<int>() == 3);
}

TEST_CASE("trace jsonl round trips every field bitwise") {
  TempDir tmp;
  const TraceSet t = small_trace();

  SUBCASE("without transform") {
    const std::string path = tmp.path("trace.jsonl");
    write_trace_jsonl(path, t, std::nullopt);

    const auto lines = read_lines(path);
    REQUIRE(lines.size() == 3);
    const json head = json::parse(lines[0]);
    CHECK(head.at("type") == "config");
    CHECK(head.at("basis") == "linear");
    CHECK(head.at("centered") == false);
    CHECK(!head.contains("shift"));

    const TraceFile back = read_trace(path);
    CHECK(!back.transform.has_value());
    const TraceSet& r = back.trace;
    CHECK(r.basis == t.basis);
    CHECK(r.config.iterations == t.config.iterations);
    CHECK(r.config.burnin == t.config.burnin);
    CHECK(r.config.thin == t.config.thin);
    CHECK(r.config.seed == t.config.seed);
    CHECK(r.config.gibbs_sweeps_per_iter == t.config.gibbs_sweeps_per_iter);
    CHECK(r.config.mh_step_sigma2 == t.config.mh_step_sigma2);
    CHECK(r.config.mh_step_delta == t.config.mh_step_delta);
    CHECK(r.config.adapt == t.config.adapt);
    CHECK(r.accept_sigma2 == t.accept_sigma2);
    CHECK((r.accept_delta.array() == t.accept_delta.array()).all());
    CHECK((r.prior.beta_mean.array() == t.prior.beta_mean.array()).all());
    CHECK((r.prior.beta_var.array() == t.prior.beta_var.array()).all());
    CHECK(r.prior.sigma2_shape == t.prior.sigma2_shape);
    CHECK(r.prior.sigma2_scale == t.prior.sigma2_scale);
    CHECK(r.prior.delta_shape == t.prior.delta_shape);
    CHECK((r.prior.delta_scale.array() == t.prior.delta_scale.array()).all());
    CHECK(r.prior.tight_intercept == t.prior.tight_intercept);
    REQUIRE(r.samples.size() == t.samples.size());
    for (std::size_t i = 0; i < t.samples.size(); ++i) {
      CHECK(r.samples[i].iter == t.samples[i].iter);
      CHECK((r.samples[i].eta.array() == t.samples[i].eta.array()).all());
      CHECK((r.samples[i].beta.array() == t.samples[i].beta.array()).all());
      CHECK(r.samples[i].sigma2 == t.samples[i].sigma2);
      CHECK((r.samples[i].delta.array() == t.samples[i].delta.array()).all());
    }
  }

  SUBCASE("with transform") {
    TransformRecord tr;
    tr.shift = Eigen::Vector2d(7.75, -0.125);
    tr.scale = Eigen::Vector2d(7.0, 1.0);
    const std::string path = tmp.path("trace_c.jsonl");
    write_trace_jsonl(path, t, tr);

    const TraceFile back = read_trace(path);
    REQUIRE(back.transform.has_value());
    CHECK((back.transform->shift.array() == tr.shift.array()).all());
    CHECK((back.transform->scale.array() == tr.scale.array()).all());
  }

  SUBCASE("rewriting what was read is byte identical") {
    const std::string p1 = tmp.path("a.jsonl");
    const std::string p2 = tmp.path("b.jsonl");
    write_trace_jsonl(p1, t, std::nullopt);
    const TraceFile back = read_trace(p1);
    write_trace_jsonl(p2, back.trace, back.transform);
    CHECK(read_lines(p1) == read_lines(p2));
  }
}

TEST_CASE("trace reader failure modes") {
  TempDir tmp;
  CHECK_THROWS_AS(read_trace(tmp.path("nope.jsonl")), MissingFile);

  const std::string empty = tmp.path("empty.jsonl");
  write_text(empty, "");
  CHECK_THROWS_AS(read_trace(empty), DataError);

  const std::string garbage = tmp.path("garbage.jsonl");
  write_text(garbage, "this is not json\n");
  CHECK_THROWS_AS(read_trace(garbage), MalformedRow);

  const std::string noheader = tmp.path("noheader.jsonl");
  write_text(noheader, "{\"iter\": 3}\n");
  CHECK_THROWS_AS(read_trace(noheader), DataError);

  TraceSet t = small_trace();
  const std::string good = tmp.path("good.jsonl");
  write_trace_jsonl(good, t, std::nullopt);
  auto lines = read_lines(good);
  REQUIRE(lines.size() == 3);

  const std::string badrow = tmp.path("badrow.jsonl");
  write_text(badrow, lines[0] + "\n{\"iter\": 3, \"beta\": [0.1]}\n");
  try {
    read_trace(badrow);
    FAIL("expected MalformedRow");
  } catch (const MalformedRow& e) {
    const std::string msg = e.what();
    CHECK(msg.find("malformed row 2") != std::string::npos);
  }

  // Blank lines between records are tolerated.
  const std::string gappy = tmp.path("gappy.jsonl");
  write_text(gappy, lines[0] + "\n\n" + lines[1] + "\n\n" + lines[2] + "\n");
  const TraceFile back = read_trace(gappy);
  CHECK(back.trace.samples.size() == 2);
}

TEST_CASE("run config defaults and json loading") {
  TempDir tmp;
  const RunConfig def = default_run_config();
  CHECK(def.mean_basis == BasisKind::Linear);
  CHECK(def.center);
  CHECK(def.mcmc.iterations == 10000);
  CHECK(def.mcmc.burnin == 5000);
  CHECK(def.mcmc.thin == 5);
  CHECK(def.mcmc.seed == 0);
  CHECK(def.grid.resolution.empty());
  CHECK(def.grid.extend == 0.0);
  CHECK(def.output_dir == ".");
  CHECK(!def.sigma2_shape);
  CHECK(!def.tight_intercept);

  SUBCASE("empty object keeps every default") {
    const std::string path = tmp.path("empty.json");
    write_text(path, "{}");
    const RunConfig cfg = load_run_config(path);
    CHECK(cfg.mean_basis == def.mean_basis);
    CHECK(cfg.center == def.center);
    CHECK(cfg.mcmc.iterations == def.mcmc.iterations);
    CHECK(cfg.mcmc.burnin == def.mcmc.burnin);
    CHECK(cfg.mcmc.thin == def.mcmc.thin);
    CHECK(cfg.mcmc.seed == def.mcmc.seed);
    CHECK(cfg.mcmc.gibbs_sweeps_per_iter == def.mcmc.gibbs_sweeps_per_iter);
    CHECK(cfg.mcmc.mh_step_sigma2 == def.mcmc.mh_step_sigma2);
    CHECK(cfg.mcmc.mh_step_delta == def.mcmc.mh_step_delta);
    CHECK(cfg.mcmc.adapt == def.mcmc.adapt);
    CHECK(cfg.grid.resolution == def.grid.resolution);
    CHECK(cfg.grid.extend == def.grid.extend);
    CHECK(cfg.output_dir == def.output_dir);
    CHECK(!cfg.sigma2_shape);
    CHECK(!cfg.sigma2_scale);
    CHECK(!cfg.delta_shape);
    CHECK(!cfg.delta_scale);
    CHECK(!cfg.beta_mean);
    CHECK(!cfg.beta_var);
    CHECK(!cfg.tight_intercept);
  }

  SUBCASE("partial override leaves siblings at defaults") {
    const std::string path = tmp.path("partial.json");
    write_text(path, R"({"mcmc": {"iterations": 200, "seed": 11}})");
    const RunConfig cfg = load_run_config(path);
    CHECK(cfg.mcmc.iterations == 200);
    CHECK(cfg.mcmc.seed == 11);
    CHECK(cfg.mcmc.burnin == def.mcmc.burnin);
    CHECK(cfg.mcmc.thin == def.mcmc.thin);
    CHECK(cfg.center == def.center);
  }

  SUBCASE("full config parses every field") {
    const std::string path = tmp.path("full.json");
    write_text(path, R"({
      "mean_basis": "constant",
      "center": false,
      "mcmc": {"iterations": 60, "burnin": 20, "thin": 4, "seed": 3,
               "gibbs_sweeps_per_iter": 2, "mh_step_sigma2": 0.25,
               "mh_step_delta": 0.75, "adapt": false},
      "grid": {"resolution": [21, 31], "extend": 0.1},
      "output_dir": "out",
      "prior": {"sigma2_shape": 4.0, "sigma2_scale": 2.0,
                "delta_shape": 5.0, "delta_scale": [1.0, 2.0],
                "beta_mean": [0.0], "beta_var": [9.0],
                "tight_intercept": true}
    })");
    const RunConfig cfg = load_run_config(path);
    CHECK(cfg.mean_basis == BasisKind::Constant);
    CHECK(!cfg.center);
    CHECK(cfg.mcmc.iterations == 60);
    CHECK(cfg.mcmc.burnin == 20);
    CHECK(cfg.mcmc.thin == 4);
    CHECK(cfg.mcmc.seed == 3);
    CHECK(cfg.mcmc.gibbs_sweeps_per_iter == 2);
    CHECK(cfg.mcmc.mh_step_sigma2 == 0.25);
    CHECK(cfg.mcmc.mh_step_delta == 0.75);
    CHECK(!cfg.mcmc.adapt);
    CHECK(cfg.grid.resolution == std::vector<int>{21, 31});
    CHECK(cfg.grid.extend == 0.1);
    CHECK(cfg.output_dir == "out");
    REQUIRE(cfg.sigma2_shape);
    CHECK(*cfg.sigma2_shape == 4.0);
    REQUIRE(cfg.sigma2_scale);
    CHECK(*cfg.sigma2_scale == 2.0);
    REQUIRE(cfg.delta_shape);
    CHECK(*cfg.delta_shape == 5.0);
    REQUIRE(cfg.delta_scale);
    CHECK(*cfg.delta_scale == std::vector<double>{1.0, 2.0});
    REQUIRE(cfg.beta_mean);
    CHECK(*cfg.beta_mean == std::vector<double>{0.0});
    REQUIRE(cfg.beta_var);
    CHECK(*cfg.beta_var == std::vector<double>{9.0});
    REQUIRE(cfg.tight_intercept);
    CHECK(*cfg.tight_intercept);
  }

  SUBCASE("failure modes") {
    CHECK_THROWS_AS(load_run_config(tmp.path("missing.json")), MissingFile);

    const std::string broken = tmp.path("broken.json");
    write_text(broken, "{\"center\": tru");
    CHECK_THROWS_AS(load_run_config(broken), UsageError);

    const std::string badtype = tmp.path("badtype.json");
    write_text(badtype, R"({"mcmc": {"iterations": "many"}})");
    CHECK_THROWS_AS(load_run_config(badtype), UsageError);

    const std::string badbasis = tmp.path("badbasis.json");
    write_text(badbasis, R"({"mean_basis": "cubic"})");
    CHECK_THROWS_AS(load_run_config(badbasis), UsageError);
  }
}

TEST_CASE("run config echo prints the effective settings") {
  RunConfig cfg = default_run_config();
  cfg.grid.resolution = {11};

  json j = json::parse(run_config_echo(cfg));
  CHECK(j.at("mean_basis") == "linear");
  CHECK(j.at("center") == true);
  CHECK(j.at("mcmc").at("iterations") == 10000);
  CHECK(j.at("grid").at("resolution") == json::array({11}));
  CHECK(j.at("output_dir") == ".");
  CHECK(!j.contains("prior"));

  cfg.sigma2_shape = 6.0;
  cfg.tight_intercept = true;
  j = json::parse(run_config_echo(cfg));
  REQUIRE(j.contains("prior"));
  CHECK(j.at("prior").at("sigma2_shape") == 6.0);
  CHECK(j.at("prior").at("tight_intercept") == true);
  CHECK(!j.at("prior").contains("delta_scale"));
}

TEST_CASE("build_prior applies overrides on top of dataset defaults") {
  const LabelledDataset raw = small_dataset();
  RunConfig cfg = default_run_config();

  SUBCASE("uncentered dataset gets the wide intercept") {
    const PriorSpec p = build_prior(cfg, raw);
    const MeanBasis basis{BasisKind::Linear, 2};
    const PriorSpec ref = default_prior(raw, basis, false);
    CHECK(p.beta_var(0) == 100.0);
    CHECK((p.beta_mean.array() == ref.beta_mean.array()).all());
    CHECK((p.delta_scale.array() == ref.delta_scale.array()).all());
    CHECK(p.sigma2_shape == ref.sigma2_shape);
    CHECK(!p.tight_intercept);
  }

  SUBCASE("centered dataset tightens the intercept automatically") {
    const auto [centered, tr] = center_dataset(raw);
    const PriorSpec p = build_prior(cfg, centered);
    CHECK(p.tight_intercept);
    CHECK(p.beta_var(0) == 0.25);

    RunConfig loose = cfg;
    loose.tight_intercept = false;
    const PriorSpec q = build_prior(loose, centered);
    CHECK(!q.tight_intercept);
    CHECK(q.beta_var(0) == 100.0);
  }

  SUBCASE("scalar and vector overrides land in the prior") {
    RunConfig over = cfg;
    over.sigma2_shape = 7.0;
    over.sigma2_scale = 1.5;
    over.delta_shape = 2.5;
    over.delta_scale = std::vector<double>{3.0, 4.0};
    over.beta_mean = std::vector<double>{0.5, -1.0, 2.0};
    over.beta_var = std::vector<double>{0.04, 25.0, 16.0};
    over.tight_intercept = true;
    const PriorSpec p = build_prior(over, raw);
    CHECK(p.sigma2_shape == 7.0);
    CHECK(p.sigma2_scale == 1.5);
    CHECK(p.delta_shape == 2.5);
    CHECK(p.delta_scale(0) == 3.0);
    CHECK(p.delta_scale(1) == 4.0);
    CHECK(p.beta_mean(1) == -1.0);
    CHECK(p.beta_var(0) == 0.04);
    CHECK(p.tight_intercept);
  }

  SUBCASE("length and validity guards") {
    RunConfig bad = cfg;
    bad.delta_scale = std::vector<double>{1.0};
    CHECK_THROWS_AS(build_prior(bad, raw), UsageError);

    bad = cfg;
    bad.beta_mean = std::vector<double>{0.0, 0.0};
    CHECK_THROWS_AS(build_prior(bad, raw), UsageError);

    bad = cfg;
    bad.beta_var = std::vector<double>{1.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(build_prior(bad, raw), UsageError);

    bad = cfg;
    bad.sigma2_shape = 0.0;
    CHECK_THROWS_AS(build_prior(bad, raw), UsageError);

    bad = cfg;
    bad.tight_intercept = true;
    bad.beta_var = std::vector<double>{9.0, 1.0, 1.0};
    CHECK_THROWS_AS(build_prior(bad, raw), UsageError);
  }
}

TEST_CASE("extended_bounds widens by a fraction of each range") {
  const LabelledDataset d = small_dataset();

  const auto same = extended_bounds(d, 0.0);
  REQUIRE(same.size() == 2);
  CHECK(same[0] == std::pair<double, double>(0.0, 1.0));
  CHECK(same[1] == std::pair<double, double>(-1.0, 2.0));

  const auto wide = extended_bounds(d, 0.25);
  CHECK(wide[0].first == -0.25);
  CHECK(wide[0].second == 1.25);
  CHECK(wide[1].first == -1.75);
  CHECK(wide[1].second == 2.75);

  CHECK_THROWS_AS(extended_bounds(d, -0.01), UsageError);
}

}  // TEST_SUITE
