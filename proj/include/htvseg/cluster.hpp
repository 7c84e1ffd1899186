#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "htvseg/field.hpp"

/// Stage 2: linear stretch, 1-D K-means and threshold labeling.
namespace htvseg::cluster {

/// Per-pixel integer labels, row-major.
struct LabelMap {
  int rows = 0;
  int cols = 0;
  std::vector<int> labels;

  int operator()(int i, int j) const { return labels[static_cast<std::size_t>(i) * cols + j]; }
  friend bool operator==(const LabelMap&, const LabelMap&) = default;
};

struct PhaseLabeling {
  LabelMap labels;                 // values in 1..K
  std::vector<double> centers;     // ascending, K entries
  std::vector<double> thresholds;  // K-1 midpoints of consecutive centers
  std::vector<double> means;       // mean stretched value per phase

  int phases() const { return static_cast<int>(centers.size()); }
};

/// (g - min) / (max - min); a constant field maps to all zeros.
ScalarField stretch(const ScalarField& g);

struct KMeansResult {
  std::vector<double> centers;       // ascending
  double wcss = 0.0;                 // within-cluster sum of squares of the best restart
  int best_restart = 0;
  std::vector<double> restart_wcss;  // one per restart, in restart order
};

/// Lloyd iteration to an assignment fixpoint from `restarts` random seedings
/// (K distinct data indices drawn per restart from a stream keyed by
/// (seed, restart)). Returns the restart with the lowest WCSS, lowest index
/// on ties. Requires K >= 2 and at least K distinct values.
KMeansResult kmeans_1d(std::span<const double> values, int K, int restarts = 10, std::uint64_t seed = 0);

/// Sum of squared distances to the nearest center.
double wcss(std::span<const double> values, std::span<const double> centers);

/// Thresholds t_i = (c_i + c_{i+1}) / 2. Pixel x gets label 1 + #{i : t_i <= x},
/// so a value on a threshold joins the upper phase. Empty phases report their
/// center as mean. Throws if centers are not ascending.
PhaseLabeling label(const ScalarField& g_stretched, std::span<const double> centers);

/// Image with every pixel replaced by its phase's mean.
ScalarField piecewise_constant(const PhaseLabeling& p);

}  // namespace htvseg::cluster
