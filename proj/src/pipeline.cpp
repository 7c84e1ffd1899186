#include "htvseg/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "htvseg/image_io.hpp"
#include "htvseg/metrics.hpp"
#include "htvseg/phantom.hpp"
#include "htvseg/weight.hpp"

namespace htvseg::pipeline {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v.size()) throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
  return x;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw std::invalid_argument(key + ": expected an integer, got '" + v + "'");
  return x;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw std::invalid_argument(key + ": expected a nonnegative integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument(key + ": expected true/false, got '" + v + "'");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(bool b) { return b ? "true" : "false"; }

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + fmt(xs[i]);
  return s;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

DegradeSpec DegradeSpec::parse(const std::string& s) {
  const auto parts = split(s, ':');
  DegradeSpec d;
  if (parts.size() == 1 && parts[0] == "none") return d;
  if (parts.size() == 3 && parts[0] == "gaussian") {
    d.kind = Kind::gaussian;
    d.size = static_cast<int>(to_integer("degrade", parts[1]));
    d.sigma = to_double("degrade", parts[2]);
    gaussian_kernel(d.size, d.sigma);  // validates
    return d;
  }
  if (parts.size() == 3 && parts[0] == "motion") {
    d.kind = Kind::motion;
    d.length = to_double("degrade", parts[1]);
    d.theta = to_double("degrade", parts[2]);
    motion_kernel(d.length, d.theta);
    return d;
  }
  throw std::invalid_argument("degrade: expected none, gaussian:<size>:<sigma> or motion:<length>:<theta>, got '" + s +
                              "'");
}

std::string DegradeSpec::to_string() const {
  switch (kind) {
    case Kind::none: return "none";
    case Kind::gaussian: return "gaussian:" + std::to_string(size) + ":" + fmt(sigma);
    case Kind::motion: return "motion:" + fmt(length) + ":" + fmt(theta);
  }
  return "none";
}

LinearOperatorA DegradeSpec::make_operator(int rows, int cols) const {
  switch (kind) {
    case Kind::none: return LinearOperatorA::identity(rows, cols);
    case Kind::gaussian: return LinearOperatorA::convolution(gaussian_kernel(size, sigma), rows, cols);
    case Kind::motion: return LinearOperatorA::convolution(motion_kernel(length, theta), rows, cols);
  }
  return LinearOperatorA::identity(rows, cols);
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "input",       "phantom",   "size",         "contrast",        "feature-size", "degrade",   "pre-degraded",
      "noise-var",   "seed",      "lambda",       "gamma",           "mu1",          "mu2",       "mu3",
      "iota",        "unconstrained", "eps",      "max-iter",        "inner-loops",  "stop-rule", "weight-sigma",
      "weight-varsigma", "phases", "restarts",    "cluster-seed",    "truth",        "out-dir",   "trace",
      "pgm-bits"};
  return keys;
}

void PipelineConfig::set(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "input") input = v;
  else if (key == "phantom") phantom = v;
  else if (key == "size") {
    const auto p = split(v, 'x');
    if (p.size() != 2) throw std::invalid_argument("size: expected <rows>x<cols>, got '" + v + "'");
    rows = static_cast<int>(to_integer(key, p[0]));
    cols = static_cast<int>(to_integer(key, p[1]));
  } else if (key == "contrast") {
    contrast.clear();
    for (const auto& c : split(v, ',')) contrast.push_back(to_double(key, trim(c)));
  } else if (key == "feature-size") feature_size = to_double(key, v);
  else if (key == "degrade") degrade = DegradeSpec::parse(v);
  else if (key == "pre-degraded") pre_degraded = to_bool(key, v);
  else if (key == "noise-var") noise_var = to_double(key, v);
  else if (key == "seed") seed = to_unsigned(key, v);
  else if (key == "lambda") solver.lambda = to_double(key, v);
  else if (key == "gamma") solver.gamma = to_double(key, v);
  else if (key == "mu1") solver.mu1 = to_double(key, v);
  else if (key == "mu2") solver.mu2 = to_double(key, v);
  else if (key == "mu3") solver.mu3 = to_double(key, v);
  else if (key == "iota") solver.iota = to_double(key, v);
  else if (key == "unconstrained") solver.constrained = !to_bool(key, v);
  else if (key == "eps") solver.epsilon = to_double(key, v);
  else if (key == "max-iter") solver.max_iter = static_cast<int>(to_integer(key, v));
  else if (key == "inner-loops") solver.inner_loops = static_cast<int>(to_integer(key, v));
  else if (key == "stop-rule") solver.stop_rule = restore::parse_stop_rule(v);
  else if (key == "weight-sigma") weight_sigma = to_double(key, v);
  else if (key == "weight-varsigma") weight_varsigma = to_double(key, v);
  else if (key == "phases") phases = static_cast<int>(to_integer(key, v));
  else if (key == "restarts") restarts = static_cast<int>(to_integer(key, v));
  else if (key == "cluster-seed") cluster_seed = to_unsigned(key, v);
  else if (key == "truth") truth = v;
  else if (key == "out-dir") out_dir = v;
  else if (key == "trace") trace = to_bool(key, v);
  else if (key == "pgm-bits") pgm_bits = static_cast<int>(to_integer(key, v));
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

void PipelineConfig::load_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config file " + path.string());
  load_stream(is, path.string());
}

void PipelineConfig::load_stream(std::istream& is, const std::string& origin) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": expected key = value");
    try {
      set(trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::entries() const {
  return {
      {"input", input},
      {"phantom", phantom},
      {"size", std::to_string(rows) + "x" + std::to_string(cols)},
      {"contrast", join(contrast)},
      {"feature-size", fmt(feature_size)},
      {"degrade", degrade.to_string()},
      {"pre-degraded", fmt(pre_degraded)},
      {"noise-var", fmt(noise_var)},
      {"seed", std::to_string(seed)},
      {"lambda", fmt(solver.lambda)},
      {"gamma", fmt(solver.gamma)},
      {"mu1", fmt(solver.mu1)},
      {"mu2", fmt(solver.mu2)},
      {"mu3", fmt(solver.mu3)},
      {"iota", fmt(solver.iota)},
      {"unconstrained", fmt(!solver.constrained)},
      {"eps", fmt(solver.epsilon)},
      {"max-iter", std::to_string(solver.max_iter)},
      {"inner-loops", std::to_string(solver.inner_loops)},
      {"stop-rule", restore::to_string(solver.stop_rule)},
      {"weight-sigma", fmt(weight_sigma)},
      {"weight-varsigma", fmt(weight_varsigma)},
      {"phases", std::to_string(phases)},
      {"restarts", std::to_string(restarts)},
      {"cluster-seed", std::to_string(cluster_seed)},
      {"truth", truth},
      {"out-dir", out_dir},
      {"trace", fmt(trace)},
      {"pgm-bits", std::to_string(pgm_bits)},
  };
}

void PipelineConfig::validate() const {
  solver.validate();
  if (input.empty()) {
    if (phantom != "disk" && phantom != "bars" && phantom != "text" && phantom != "three")
      throw std::invalid_argument("phantom: expected disk, bars, text or three");
    const std::size_t want = phantom == "three" ? 3 : 2;
    if (contrast.size() != want)
      throw std::invalid_argument("contrast: phantom '" + phantom + "' needs " + std::to_string(want) + " values");
    if (rows < 1 || cols < 1) throw std::invalid_argument("size: dimensions must be positive");
  }
  if (!(noise_var >= 0.0)) throw std::invalid_argument("noise-var: must be >= 0");
  if (!(weight_sigma >= 0.0)) throw std::invalid_argument("weight-sigma: must be >= 0");
  if (!(weight_varsigma >= 0.0)) throw std::invalid_argument("weight-varsigma: must be >= 0");
  if (phases < 2) throw std::invalid_argument("phases: must be >= 2");
  if (restarts < 1) throw std::invalid_argument("restarts: must be >= 1");
  if (pgm_bits != 8 && pgm_bits != 16) throw std::invalid_argument("pgm-bits: must be 8 or 16");
}

RunReport run_pipeline(const PipelineConfig& config) {
  config.validate();
  RunReport r;
  r.config = config;

  auto t0 = std::chrono::steady_clock::now();
  ScalarField image;
  if (!config.input.empty()) {
    image = io::load_image(config.input);
    r.source = config.input;
  } else {
    phantom::Phantom ph =
        config.phantom == "three"
            ? phantom::make_three_phase(config.rows, config.cols, config.contrast[0], config.contrast[1],
                                        config.contrast[2], config.feature_size, -1.0)
            : phantom::make_two_phase(config.rows, config.cols, phantom::parse_shape(config.phantom),
                                      config.contrast[0], config.contrast[1], config.feature_size);
    image = std::move(ph.image);
    r.source = "phantom: " + ph.descriptor;
    r.truth = std::move(ph.truth.labels);
  }
  if (!config.truth.empty()) r.truth = io::load_truth(config.truth);
  if (r.truth && (r.truth->rows != image.rows() || r.truth->cols != image.cols()))
    throw std::invalid_argument("truth: shape does not match the input image");

  const LinearOperatorA A = config.degrade.make_operator(image.rows(), image.cols());
  r.degradation_applied =
      !config.pre_degraded && (config.degrade.kind != DegradeSpec::Kind::none || config.noise_var > 0.0);
  r.degraded = r.degradation_applied ? add_gaussian_noise(A.apply(image), config.noise_var, config.seed) : image;
  const WeightField omega = edge_indicator(r.degraded, config.weight_sigma, config.weight_varsigma);
  r.timings.degrade_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  std::ostringstream trace;
  restore::RunOptions opts;
  if (config.trace) opts.trace = &trace;
  restore::RestoreResult res = restore::run(r.degraded, A, config.solver, omega, opts);
  r.restored = std::move(res.restored);
  r.iterations = res.report.iterations();
  r.termination = res.report.reason;
  r.final_record = res.report.last();
  r.warnings = res.report.warnings;
  r.timings.restore_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  r.stretched = cluster::stretch(r.restored);
  r.kmeans = cluster::kmeans_1d(r.stretched.values(), config.phases, config.restarts, config.cluster_seed);
  r.labeling = cluster::label(r.stretched, r.kmeans.centers);
  r.reconstruction = cluster::piecewise_constant(r.labeling);
  if (r.truth) r.sa = metrics::sa(r.labeling, metrics::GroundTruth{*r.truth, config.phases});
  r.timings.cluster_s = seconds_since(t0);

  if (!config.out_dir.empty()) {
    const std::filesystem::path dir = config.out_dir;
    std::filesystem::create_directories(dir);
    auto both = [&](const ScalarField& f, const std::string& stem) {
      io::save_raw(f, dir / (stem + ".f64"));
      io::save_pgm(f, dir / (stem + ".pgm"), config.pgm_bits);
    };
    both(r.degraded, "degraded");
    both(r.restored, "restored");
    both(r.stretched, "stretched");
    both(r.reconstruction, "reconstruction");
    io::save_labels(r.labeling.labels, dir / "labels.lbl");
    io::save_label_pgm(r.labeling.labels, config.phases, dir / "labels.pgm");
    if (r.truth) io::save_labels(*r.truth, dir / "truth.lbl");
    if (config.trace) {
      std::ofstream os(dir / "trace.tsv", std::ios::binary | std::ios::trunc);
      os << trace.str();
    }
    std::ofstream os(dir / "report.json", std::ios::binary | std::ios::trunc);
    os << report_json(r) << '\n';
    if (!os) throw io::FormatError("cannot write report.json");
  }
  return r;
}

std::string report_json(const RunReport& r) {
  using nlohmann::ordered_json;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : r.config.entries()) cfg[k] = v;

  ordered_json j;
  j["config"] = cfg;
  j["source"] = r.source;
  j["degradation_applied"] = r.degradation_applied;
  j["solver"] = {
      {"iterations", r.iterations},
      {"termination", restore::to_string(r.termination)},
      {"residual_q", r.final_record.residual_q},
      {"residual_v", r.final_record.residual_v},
      {"residual_z", r.final_record.residual_z},
      {"increment_b", r.final_record.increment_b},
      {"increment_c", r.final_record.increment_c},
      {"increment_d", r.final_record.increment_d},
      {"objective", r.final_record.objective},
  };
  j["warnings"] = r.warnings;
  j["kmeans"] = {
      {"restart_wcss", r.kmeans.restart_wcss},
      {"best_restart", r.kmeans.best_restart},
      {"wcss", r.kmeans.wcss},
  };
  j["centers"] = r.labeling.centers;
  j["thresholds"] = r.labeling.thresholds;
  j["phase_means"] = r.labeling.means;
  j["sa"] = r.sa ? ordered_json(*r.sa) : ordered_json(nullptr);
  return j.dump(2);
}

}  // namespace htvseg::pipeline
