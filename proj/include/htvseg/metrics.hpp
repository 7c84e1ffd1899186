#pragma once

#include "htvseg/cluster.hpp"

namespace htvseg::metrics {

/// Reference labels in 1..phases.
struct GroundTruth {
  cluster::LabelMap labels;
  int phases = 0;
};

/// Percentage of misclassified pixels (lower is better). With
/// match_permutations the minimum over all relabelings of the prediction is
/// taken; that mode is limited to 6 phases.
double sa(const cluster::LabelMap& pred, const GroundTruth& truth, bool match_permutations = false);
double sa(const cluster::PhaseLabeling& pred, const GroundTruth& truth, bool match_permutations = false);

}  // namespace htvseg::metrics
