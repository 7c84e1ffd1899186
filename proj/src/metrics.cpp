#include "htvseg/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace htvseg::metrics {

namespace {

void check_range(const cluster::LabelMap& m, int phases, const char* what) {
  for (int l : m.labels)
    if (l < 1 || l > phases) throw std::invalid_argument(std::string("sa: ") + what + " label out of range");
}

}  // namespace

double sa(const cluster::LabelMap& pred, const GroundTruth& truth, bool match_permutations) {
  const int K = truth.phases;
  if (K < 1) throw std::invalid_argument("sa: ground truth must have at least one phase");
  if (pred.rows != truth.labels.rows || pred.cols != truth.labels.cols || pred.labels.size() != truth.labels.labels.size())
    throw std::invalid_argument("sa: shape mismatch");
  if (pred.labels.empty()) throw std::invalid_argument("sa: empty labeling");
  check_range(pred, K, "predicted");
  check_range(truth.labels, K, "ground-truth");

  const double total = static_cast<double>(pred.labels.size());
  if (!match_permutations) {
    std::size_t wrong = 0;
    for (std::size_t k = 0; k < pred.labels.size(); ++k) wrong += pred.labels[k] != truth.labels.labels[k];
    return 100.0 * static_cast<double>(wrong) / total;
  }

  if (K > 6) throw std::invalid_argument("sa: permutation matching supports at most 6 phases");
  // confusion[p][t]: pixels predicted p with truth t
  std::vector<std::size_t> confusion(static_cast<std::size_t>(K) * K, 0);
  for (std::size_t k = 0; k < pred.labels.size(); ++k)
    ++confusion[static_cast<std::size_t>(pred.labels[k] - 1) * K + (truth.labels.labels[k] - 1)];

  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best_correct = 0;
  do {
    std::size_t correct = 0;
    for (int p = 0; p < K; ++p) correct += confusion[static_cast<std::size_t>(p) * K + perm[p]];
    best_correct = std::max(best_correct, correct);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return 100.0 * (total - static_cast<double>(best_correct)) / total;
}

double sa(const cluster::PhaseLabeling& pred, const GroundTruth& truth, bool match_permutations) {
  if (pred.phases() != truth.phases) throw std::invalid_argument("sa: phase count mismatch");
  return sa(pred.labels, truth, match_permutations);
}

}  // namespace htvseg::metrics
