#pragma once

#include "htvseg/field.hpp"

namespace htvseg {

/// Edge indicator w(x) = 1 / (1 + varsigma * |grad f_sigma(x)|^2), in (0, 1].
struct WeightField {
  ScalarField omega;
  double sigma = 0.0;
  double varsigma = 0.0;
};

/// Periodic convolution with a sampled Gaussian truncated at radius ceil(3 sigma)
/// and normalized to unit sum. sigma == 0 returns f unchanged.
ScalarField gaussian_smooth(const ScalarField& f, double sigma);

/// sigma and varsigma must be nonnegative.
WeightField edge_indicator(const ScalarField& f, double sigma, double varsigma);

/// w == 1 everywhere, which reduces the hybrid model to first-order TV.
WeightField uniform_weight(int rows, int cols);

}  // namespace htvseg
