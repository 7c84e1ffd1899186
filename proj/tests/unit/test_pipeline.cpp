#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "htvseg/image_io.hpp"
#include "htvseg/metrics.hpp"
#include "htvseg/pipeline.hpp"

using namespace htvseg;
using namespace htvseg::pipeline;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

PipelineConfig small(const std::string& out) {
  PipelineConfig c;
  c.rows = c.cols = 32;
  c.solver.max_iter = 40;
  c.restarts = 3;
  c.out_dir = out;
  return c;
}

}  // namespace

TEST_CASE("degradation specs") {
  CHECK(DegradeSpec::parse("none").kind == DegradeSpec::Kind::none);
  const auto g = DegradeSpec::parse("gaussian:5:5");
  CHECK(g.kind == DegradeSpec::Kind::gaussian);
  CHECK(g.size == 5);
  CHECK(g.sigma == 5.0);
  CHECK(DegradeSpec::parse(g.to_string()).to_string() == g.to_string());
  const auto m = DegradeSpec::parse("motion:9:30");
  CHECK(m.length == 9.0);
  CHECK(m.theta == 30.0);
  CHECK(m.make_operator(16, 16).kind() == LinearOperatorA::Kind::convolution);
  CHECK_THROWS(DegradeSpec::parse("gaussian:4:1"));
  CHECK_THROWS(DegradeSpec::parse("box:3"));
}

TEST_CASE("config parsing and echo") {
  PipelineConfig c;
  std::istringstream is(
      "# comment\n"
      "lambda = 0.25\n"
      "size = 20x30   # trailing\n"
      "degrade = motion:5:45\n"
      "unconstrained = true\n"
      "stop-rule = min\n"
      "contrast = 0.1, 0.9\n");
  c.load_stream(is);
  CHECK(c.solver.lambda == 0.25);
  CHECK(c.rows == 20);
  CHECK(c.cols == 30);
  CHECK_FALSE(c.solver.constrained);
  CHECK(c.solver.stop_rule == restore::StopRule::min_increment);
  CHECK(c.contrast == std::vector<double>{0.1, 0.9});

  PipelineConfig d;
  for (const auto& [k, v] : c.entries()) d.set(k, v);
  CHECK(d.entries() == c.entries());
  std::vector<std::string> keys;
  for (const auto& [k, v] : c.entries()) keys.push_back(k);
  CHECK(keys == config_keys());

  CHECK_THROWS_AS(c.set("lamda", "1"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("lambda", "abc"), std::invalid_argument);
  CHECK_THROWS_AS(c.set("max-iter", "1.5"), std::invalid_argument);
  std::istringstream bad("lambda 3\n");
  CHECK_THROWS_AS(c.load_stream(bad), std::invalid_argument);
  c = {};
  c.phantom = "three";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.contrast = {0.1, 0.5, 0.9};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("clean phantom segments perfectly") {
  for (const std::string shape : {"disk", "bars", "text"}) {
    PipelineConfig c = small("");
    c.phantom = shape;
    c.rows = 48;
    c.cols = 64;
    c.solver.max_iter = 300;
    c.solver.lambda = c.solver.gamma = 1e-3;
    const auto r = run_pipeline(c);
    CAPTURE(shape);
    REQUIRE(r.sa.has_value());
    CHECK(*r.sa == 0.0);
    CHECK_FALSE(r.degradation_applied);
  }
  PipelineConfig c = small("");
  c.phantom = "three";
  c.contrast = {0.1, 0.5, 0.9};
  c.phases = 3;
  c.solver.lambda = c.solver.gamma = 1e-3;
  CHECK(*run_pipeline(c).sa == 0.0);
}

TEST_CASE("artifacts are written, deterministic and consistent with the report") {
  const auto base = fs::temp_directory_path() / "htvseg_pipeline";
  fs::remove_all(base);
  PipelineConfig c = small((base / "a").string());
  c.noise_var = 0.05;
  c.seed = 4;
  c.trace = true;
  const auto r = run_pipeline(c);
  c.out_dir = (base / "b").string();
  run_pipeline(c);

  const std::vector<std::string> files = {"degraded.f64", "degraded.pgm", "restored.f64", "restored.pgm",
                                          "stretched.f64", "stretched.pgm", "labels.lbl", "labels.pgm",
                                          "reconstruction.f64", "reconstruction.pgm", "truth.lbl", "trace.tsv",
                                          "report.json"};
  for (const auto& f : files) {
    REQUIRE(fs::exists(base / "a" / f));
    if (f == "report.json") continue;  // echoes its own out-dir
    CHECK(slurp(base / "a" / f) == slurp(base / "b" / f));
  }
  CHECK(io::load_raw(base / "a" / "restored.f64") == r.restored);
  CHECK(io::load_raw(base / "a" / "degraded.f64") == r.degraded);

  const auto labels = io::load_labels(base / "a" / "labels.lbl");
  const auto truth = io::load_labels(base / "a" / "truth.lbl");
  CHECK(metrics::sa(labels, metrics::GroundTruth{truth, 2}) == *r.sa);
  const std::string report = slurp(base / "a" / "report.json");
  CHECK(report.find("\"sa\"") != std::string::npos);
  CHECK(report.find("\"restart_wcss\"") != std::string::npos);
  CHECK(report.find("\"config\"") < report.find("\"solver\""));
}

TEST_CASE("external input with pre-applied degradation") {
  const auto dir = fs::temp_directory_path() / "htvseg_pipeline_in";
  fs::create_directories(dir);
  PipelineConfig gen = small("");
  gen.noise_var = 0.01;
  const auto first = run_pipeline(gen);
  io::save_raw(first.degraded, dir / "in.f64");
  io::save_labels(*first.truth, dir / "truth.lbl");

  PipelineConfig c = small("");
  c.input = (dir / "in.f64").string();
  c.truth = (dir / "truth.lbl").string();
  c.pre_degraded = true;
  c.degrade = DegradeSpec::parse("gaussian:3:1");
  const auto r = run_pipeline(c);
  CHECK_FALSE(r.degradation_applied);
  CHECK(r.degraded == first.degraded);
  CHECK(r.sa.has_value());

  c.truth.clear();
  CHECK_FALSE(run_pipeline(c).sa.has_value());
  c.input = (dir / "missing.pgm").string();
  CHECK_THROWS(run_pipeline(c));
}
