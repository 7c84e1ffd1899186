#pragma once

#include <string>
#include <vector>

#include "htvseg/field.hpp"
#include "htvseg/metrics.hpp"

/// Synthetic piecewise-constant test images with exact ground truth.
namespace htvseg::phantom {

enum class Shape { disk, bars, text };

Shape parse_shape(const std::string& s);
std::string to_string(Shape s);

struct Phantom {
  ScalarField image;
  metrics::GroundTruth truth;
  std::vector<double> constants;  // constants[l - 1] is the value of label l
  std::string descriptor;
};

/// Background c0 (label 1), foreground c1 (label 2), 0 <= c0 < c1 <= 1.
/// feature_size is the disk radius, the bar width or the glyph stroke in
/// pixels; a negative value picks a default relative to the image size.
/// Pixel (i, j) has center (i + 0.5, j + 0.5); it is inside the disk iff its
/// center is strictly closer than the radius to (m/2, n/2).
Phantom make_two_phase(int m, int n, Shape shape, double c0, double c1, double feature_size = -1.0);

/// Background c0, a centered disk c1 of radius outer_radius and, nested inside
/// it, a centered square c2 of half-side inner_half_side. Negative sizes pick
/// defaults. Constants must be strictly increasing in [0, 1].
Phantom make_three_phase(int m, int n, double c0, double c1, double c2, double outer_radius = -1.0,
                         double inner_half_side = -1.0);

}  // namespace htvseg::phantom
