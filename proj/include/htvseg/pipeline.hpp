#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "htvseg/cluster.hpp"
#include "htvseg/degrade.hpp"
#include "htvseg/restore.hpp"

/// End-to-end two-stage segmentation: degrade (optional), restore, stretch,
/// cluster, label, score.
namespace htvseg::pipeline {

/// "none", "gaussian:<size>:<sigma>" or "motion:<length>:<theta_deg>".
struct DegradeSpec {
  enum class Kind { none, gaussian, motion };
  Kind kind = Kind::none;
  int size = 0;
  double sigma = 0.0;
  double length = 0.0;
  double theta = 0.0;

  static DegradeSpec parse(const std::string& s);
  std::string to_string() const;
  LinearOperatorA make_operator(int rows, int cols) const;
};

struct PipelineConfig {
  std::string input;           // image path; empty means use the phantom
  std::string phantom = "disk";  // disk | bars | text | three
  int rows = 128;
  int cols = 128;
  std::vector<double> contrast{0.2, 0.8};
  double feature_size = -1.0;

  DegradeSpec degrade;
  bool pre_degraded = false;  // input already equals A g + noise; degrade only defines A
  double noise_var = 0.0;
  std::uint64_t seed = 0;

  restore::SolverParams solver;
  double weight_sigma = 1.0;
  double weight_varsigma = 10.0;

  int phases = 2;
  int restarts = 10;
  std::uint64_t cluster_seed = 0;

  std::string truth;
  std::string out_dir;
  bool trace = false;
  int pgm_bits = 8;

  /// Sets one key (the long flag name without dashes). Throws
  /// std::invalid_argument for unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);

  /// Flat "key = value" lines; '#' starts a comment.
  void load_file(const std::filesystem::path& path);
  void load_stream(std::istream& is, const std::string& origin = "<config>");

  /// Every key in a fixed order, formatted so that set() reproduces it.
  std::vector<std::pair<std::string, std::string>> entries() const;

  void validate() const;
};

/// All recognised config keys, in report order.
const std::vector<std::string>& config_keys();

struct StageTimings {
  double degrade_s = 0.0;
  double restore_s = 0.0;
  double cluster_s = 0.0;
};

struct RunReport {
  PipelineConfig config;
  std::string source;       // "phantom: ..." or the input path
  bool degradation_applied = false;
  int iterations = 0;
  restore::Termination termination = restore::Termination::max_iterations;
  restore::IterationRecord final_record;
  std::vector<std::string> warnings;
  cluster::KMeansResult kmeans;
  cluster::PhaseLabeling labeling;
  std::optional<double> sa;  // percent misclassified, when ground truth is known
  StageTimings timings;      // not written to the report file

  ScalarField degraded;
  ScalarField restored;
  ScalarField stretched;
  ScalarField reconstruction;
  std::optional<cluster::LabelMap> truth;
};

/// Runs the pipeline and, when config.out_dir is set, writes:
///   degraded.{f64,pgm}  restored.{f64,pgm}  stretched.{f64,pgm}
///   labels.lbl (authoritative)  labels.pgm  reconstruction.{f64,pgm}
///   truth.lbl (when known)  trace.tsv (with config.trace)  report.json
RunReport run_pipeline(const PipelineConfig& config);

/// Report document with keys in this order: config, source,
/// degradation_applied, solver{iterations, termination, residual_q,
/// residual_v, residual_z, increment_b, increment_c, increment_d, objective},
/// warnings, kmeans{restart_wcss, best_restart, wcss}, centers, thresholds,
/// phase_means, sa (null without ground truth).
std::string report_json(const RunReport& report);

}  // namespace htvseg::pipeline
