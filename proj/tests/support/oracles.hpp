#pragma once

// Reference implementations used only by the tests. They are written from the
// defining formulas with explicit index arithmetic and dense linear algebra,
// independently of the library's stencils and FFT paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "htvseg/field.hpp"

namespace oracle {

using htvseg::ScalarField;
using htvseg::Vec2Field;
using htvseg::Vec4Field;

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

// u(i+di, j+dj) with periodic wrap.
inline double at(const ScalarField& u, int i, int j) {
  return u(wrap(i, u.rows()), wrap(j, u.cols()));
}

inline ScalarField map(const ScalarField& u, const std::function<double(int, int)>& f) {
  ScalarField out(u.rows(), u.cols());
  for (int i = 0; i < u.rows(); ++i)
    for (int j = 0; j < u.cols(); ++j) out(i, j) = f(i, j);
  return out;
}

// Forward/backward differences along rows (x) and columns (y).
inline ScalarField dxp(const ScalarField& u) { return map(u, [&](int i, int j) { return at(u, i + 1, j) - at(u, i, j); }); }
inline ScalarField dxm(const ScalarField& u) { return map(u, [&](int i, int j) { return at(u, i, j) - at(u, i - 1, j); }); }
inline ScalarField dyp(const ScalarField& u) { return map(u, [&](int i, int j) { return at(u, i, j + 1) - at(u, i, j); }); }
inline ScalarField dym(const ScalarField& u) { return map(u, [&](int i, int j) { return at(u, i, j) - at(u, i, j - 1); }); }

inline Vec2Field grad(const ScalarField& u) {
  Vec2Field p;
  p.comp = {dxp(u), dyp(u)};
  return p;
}

inline Vec4Field grad2(const ScalarField& u) {
  Vec4Field p;
  p.comp = {dxm(dxp(u)), dxm(dyp(u)), dyp(dxm(u)), dyp(dym(u))};
  return p;
}

inline double plain_dot(const ScalarField& a, const ScalarField& b) {
  long double s = 0.0L;
  for (std::size_t k = 0; k < a.size(); ++k) s += static_cast<long double>(a[k]) * b[k];
  return static_cast<double>(s);
}

template <std::size_t C>
double plain_dot(const htvseg::VecField<C>& a, const htvseg::VecField<C>& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < C; ++c) s += plain_dot(a.comp[c], b.comp[c]);
  return s;
}

// Dense column-major matrix of a linear map on m x n fields: column k is the
// image of the k-th unit impulse, flattened row-major.
inline std::vector<std::vector<double>> dense(int m, int n, const std::function<ScalarField(const ScalarField&)>& op) {
  const int N = m * n;
  std::vector<std::vector<double>> M(N, std::vector<double>(N));
  for (int k = 0; k < N; ++k) {
    ScalarField e(m, n, 0.0);
    e[k] = 1.0;
    const ScalarField col = op(e);
    for (int r = 0; r < N; ++r) M[r][k] = col[r];
  }
  return M;
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> M, std::vector<double> b) {
  const std::size_t N = b.size();
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < N; ++r)
      if (std::abs(M[r][c]) > std::abs(M[p][c])) p = r;
    if (M[p][c] == 0.0) throw std::runtime_error("singular system");
    std::swap(M[p], M[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < N; ++r) {
      const double f = M[r][c] / M[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < N; ++k) M[r][k] -= f * M[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(N);
  for (std::size_t r = N; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < N; ++k) s -= M[r][k] * x[k];
    x[r] = s / M[r][r];
  }
  return x;
}

// Periodic convolution (k * g)(i, j) = sum_{a,b} k(a, b) g(i - a + ca, j - b + cb)
// with the middle tap (ca, cb) at the origin.
inline ScalarField convolve(const ScalarField& g, int kr, int kc, const std::vector<double>& taps) {
  const int ca = kr / 2, cb = kc / 2;
  return map(g, [&](int i, int j) {
    double s = 0.0;
    for (int a = 0; a < kr; ++a)
      for (int b = 0; b < kc; ++b) s += taps[static_cast<std::size_t>(a) * kc + b] * at(g, i - (a - ca), j - (b - cb));
    return s;
  });
}

// Correlation, the adjoint of convolve.
inline ScalarField correlate(const ScalarField& g, int kr, int kc, const std::vector<double>& taps) {
  const int ca = kr / 2, cb = kc / 2;
  return map(g, [&](int i, int j) {
    double s = 0.0;
    for (int a = 0; a < kr; ++a)
      for (int b = 0; b < kc; ++b) s += taps[static_cast<std::size_t>(a) * kc + b] * at(g, i + (a - ca), j + (b - cb));
    return s;
  });
}

// argmin_rho (xi/2)|rho - w|^2 + |rho| for rho in R^C, by golden-section
// search over the magnitude along w (the minimizer is a nonnegative multiple
// of w).
inline std::vector<double> prox_l2(const std::vector<double>& w, double xi) {
  double norm = 0.0;
  for (double x : w) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) return std::vector<double>(w.size(), 0.0);
  auto phi = [&](double s) { return 0.5 * xi * (s - norm) * (s - norm) + s; };
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = norm;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, norm); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = phi(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = phi(x2);
    }
  }
  double s = 0.5 * (a + b);
  if (phi(0.0) <= phi(s)) s = 0.0;
  std::vector<double> out(w.size());
  for (std::size_t c = 0; c < w.size(); ++c) out[c] = s * w[c] / norm;
  return out;
}

// Exhaustive optimum of 1-D K-means: the best partition of the sorted values
// into K nonempty contiguous runs.
inline double kmeans_optimum(std::vector<double> x, int K) {
  std::sort(x.begin(), x.end());
  const int n = static_cast<int>(x.size());
  auto cost = [&](int lo, int hi) {  // [lo, hi)
    double mean = 0.0;
    for (int i = lo; i < hi; ++i) mean += x[i];
    mean /= (hi - lo);
    double s = 0.0;
    for (int i = lo; i < hi; ++i) s += (x[i] - mean) * (x[i] - mean);
    return s;
  };
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> cut(K + 1);
  cut[0] = 0;
  cut[K] = n;
  std::function<void(int, double)> rec = [&](int k, double acc) {
    if (k == K) {
      best = std::min(best, acc + 0.0);
      return;
    }
    if (k == K - 1) {
      rec(K, acc + cost(cut[k], n));
      return;
    }
    for (int c = cut[k] + 1; c <= n - (K - k - 1); ++c) {
      cut[k + 1] = c;
      rec(k + 1, acc + cost(cut[k], c));
    }
  };
  rec(0, 0.0);
  return best;
}

inline ScalarField random_field(int m, int n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> U(lo, hi);
  ScalarField out(m, n);
  for (auto& v : out.values()) v = U(rng);
  return out;
}

template <std::size_t C>
htvseg::VecField<C> random_vec(int m, int n, std::mt19937_64& rng) {
  htvseg::VecField<C> out;
  for (auto& c : out.comp) c = random_field(m, n, rng);
  return out;
}

}  // namespace oracle
