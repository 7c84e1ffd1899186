#include "htvseg/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace htvseg::cluster {

namespace {

constexpr int kMaxLloydIterations = 10000;
constexpr int kMaxSeedingAttempts = 1000;

double binomial(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i) c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c;
}

int nearest(double x, const std::vector<double>& centers) {
  int best = 0;
  double best_d = std::abs(x - centers[0]);
  for (int k = 1; k < static_cast<int>(centers.size()); ++k) {
    const double d = std::abs(x - centers[k]);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

bool assign(std::span<const double> values, const std::vector<double>& centers, std::vector<int>& owner) {
  bool changed = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int k = nearest(values[i], centers);
    if (k != owner[i]) {
      owner[i] = k;
      changed = true;
    }
  }
  return changed;
}

// Lloyd to an assignment fixpoint. An empty cluster is re-seeded at the point
// farthest from its current center.
std::vector<double> lloyd(std::span<const double> values, std::vector<double> centers) {
  const int K = static_cast<int>(centers.size());
  std::vector<int> owner(values.size(), -1);
  assign(values, centers, owner);
  for (int it = 0; it < kMaxLloydIterations; ++it) {
    std::vector<double> sum(K, 0.0);
    std::vector<std::size_t> count(K, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      sum[owner[i]] += values[i];
      ++count[owner[i]];
    }
    for (int k = 0; k < K; ++k) {
      if (count[k] > 0) {
        centers[k] = sum[k] / static_cast<double>(count[k]);
        continue;
      }
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = std::abs(values[i] - centers[owner[i]]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centers[k] = values[far];
      owner[far] = k;
    }
    if (!assign(values, centers, owner)) break;
  }
  std::sort(centers.begin(), centers.end());
  return centers;
}

}  // namespace

ScalarField stretch(const ScalarField& g) {
  const double lo = g.min(), hi = g.max();
  ScalarField out(g.rows(), g.cols(), 0.0);
  if (!(hi > lo)) return out;
  const double span = hi - lo;
  for (std::size_t k = 0; k < g.size(); ++k) out[k] = (g[k] - lo) / span;
  return out;
}

double wcss(std::span<const double> values, std::span<const double> centers) {
  std::vector<double> c(centers.begin(), centers.end());
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - c[nearest(values[i], c)];
    sq[i] = d * d;
  }
  return pairwise_sum(sq);
}

KMeansResult kmeans_1d(std::span<const double> values, int K, int restarts, std::uint64_t seed) {
  if (K < 2) throw std::invalid_argument("kmeans_1d: K must be >= 2");
  if (restarts < 1) throw std::invalid_argument("kmeans_1d: restarts must be >= 1");
  {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto distinct = std::unique(sorted.begin(), sorted.end()) - sorted.begin();
    if (distinct < K) throw std::invalid_argument("kmeans_1d: fewer distinct values than clusters");
  }

  // Restarts use distinct seedings (as value sets) until every seeding has
  // been tried, so enough restarts cover the whole seeding space.
  const double seedings = binomial(values.size(), static_cast<std::size_t>(K));
  std::set<std::vector<double>> tried;

  KMeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> index(values.size());
  std::iota(index.begin(), index.end(), std::size_t{0});
  std::vector<std::size_t> swapped(K);
  for (int r = 0; r < restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::mt19937_64 rng(seq);
    std::vector<double> init(K);
    for (int attempt = 0;; ++attempt) {
      for (int k = 0; k < K; ++k) {
        std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), index.size() - 1);
        swapped[k] = pick(rng);
        std::swap(index[k], index[swapped[k]]);
        init[k] = values[index[k]];
      }
      for (int k = K; k-- > 0;) std::swap(index[k], index[swapped[k]]);
      std::vector<double> key = init;
      std::sort(key.begin(), key.end());
      const bool exhausted = static_cast<double>(tried.size()) >= seedings || attempt >= kMaxSeedingAttempts;
      if (tried.insert(std::move(key)).second || exhausted) break;
    }
    std::vector<double> centers = lloyd(values, std::move(init));
    const double e = wcss(values, centers);
    best.restart_wcss.push_back(e);
    if (e < best.wcss) {
      best.wcss = e;
      best.centers = std::move(centers);
      best.best_restart = r;
    }
  }
  return best;
}

PhaseLabeling label(const ScalarField& g, std::span<const double> centers) {
  if (centers.size() < 2) throw std::invalid_argument("label: need at least two centers");
  if (!std::is_sorted(centers.begin(), centers.end()))
    throw std::invalid_argument("label: centers must be sorted ascending");

  PhaseLabeling p;
  p.centers.assign(centers.begin(), centers.end());
  const int K = p.phases();
  for (int i = 0; i + 1 < K; ++i) p.thresholds.push_back((p.centers[i] + p.centers[i + 1]) / 2.0);

  p.labels = {g.rows(), g.cols(), std::vector<int>(g.size())};
  std::vector<double> sum(K, 0.0);
  std::vector<std::size_t> count(K, 0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto above = std::upper_bound(p.thresholds.begin(), p.thresholds.end(), g[k]) - p.thresholds.begin();
    const int phase = static_cast<int>(above) + 1;
    p.labels.labels[k] = phase;
    sum[phase - 1] += g[k];
    ++count[phase - 1];
  }
  p.means.resize(K);
  for (int i = 0; i < K; ++i) p.means[i] = count[i] ? sum[i] / static_cast<double>(count[i]) : p.centers[i];
  return p;
}

ScalarField piecewise_constant(const PhaseLabeling& p) {
  ScalarField out(p.labels.rows, p.labels.cols);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = p.means[p.labels.labels[k] - 1];
  return out;
}

}  // namespace htvseg::cluster
