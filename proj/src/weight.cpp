#include "htvseg/weight.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "htvseg/grid.hpp"

namespace htvseg {

ScalarField gaussian_smooth(const ScalarField& f, double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("gaussian_smooth: sigma must be >= 0");
  if (sigma == 0.0) return f;

  const int r = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> taps(2 * r + 1);
  double sum = 0.0;
  for (int k = -r; k <= r; ++k) {
    taps[k + r] = std::exp(-(k * k) / (2.0 * sigma * sigma));
    sum += taps[k + r];
  }
  for (double& t : taps) t /= sum;

  // Separable: rows then columns, periodic indices.
  const int m = f.rows(), n = f.cols();
  ScalarField tmp(m, n), out(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = -r; k <= r; ++k) s += taps[k + r] * f(((i + k) % m + m) % m, j);
      tmp(i, j) = s;
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = -r; k <= r; ++k) s += taps[k + r] * tmp(i, ((j + k) % n + n) % n);
      out(i, j) = s;
    }
  return out;
}

WeightField edge_indicator(const ScalarField& f, double sigma, double varsigma) {
  if (!(varsigma >= 0.0) || !std::isfinite(varsigma))
    throw std::invalid_argument("edge_indicator: varsigma must be >= 0");
  const Vec2Field g = grid::grad(gaussian_smooth(f, sigma));
  WeightField w{ScalarField(f.rows(), f.cols()), sigma, varsigma};
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double mag2 = g[0][k] * g[0][k] + g[1][k] * g[1][k];
    w.omega[k] = 1.0 / (1.0 + varsigma * mag2);
  }
  return w;
}

WeightField uniform_weight(int rows, int cols) { return {ScalarField(rows, cols, 1.0), 0.0, 0.0}; }

}  // namespace htvseg
