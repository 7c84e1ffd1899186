#include "htvseg/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace htvseg::phantom {

namespace {

void check_size(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("phantom: image dimensions must be positive");
}

void check_constants(const std::vector<double>& c) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!(c[i] >= 0.0 && c[i] <= 1.0)) throw std::invalid_argument("phantom: constants must lie in [0, 1]");
    if (i > 0 && !(c[i] > c[i - 1])) throw std::invalid_argument("phantom: constants must be strictly increasing");
  }
}

bool in_disk(int i, int j, int m, int n, double r) {
  const double di = i + 0.5 - m / 2.0;
  const double dj = j + 0.5 - n / 2.0;
  return di * di + dj * dj < r * r;
}

// 5x3 block glyphs for "U", "O", "L".
constexpr std::array<const char*, 15> kGlyphs = {
    "1.1", "1.1", "1.1", "1.1", "111",  // U
    "111", "1.1", "1.1", "1.1", "111",  // O
    "1..", "1..", "1..", "1..", "111",  // L
};

bool in_text(int i, int j, int m, int n, double stroke) {
  // 11 x 5 glyph units plus a one-unit margin on each side.
  const int cell = stroke > 0.0 ? static_cast<int>(stroke) : std::min(m / 7, n / 13);
  if (cell < 1) throw std::invalid_argument("phantom: image too small for text glyphs");
  const int top = (m - 5 * cell) / 2;
  const int left = (n - 11 * cell) / 2;
  const int u = i - top, v = j - left;
  if (u < 0 || v < 0) return false;
  const int row = u / cell, col = v / cell;
  if (row >= 5 || col >= 11) return false;
  const int glyph = col / 4, gcol = col % 4;
  if (gcol == 3) return false;  // spacing column
  return kGlyphs[glyph * 5 + row][gcol] == '1';
}

Phantom assemble(int m, int n, std::vector<double> constants, const std::vector<int>& labels, std::string descriptor) {
  Phantom p;
  p.image = ScalarField(m, n);
  for (std::size_t k = 0; k < labels.size(); ++k) p.image[k] = constants[labels[k] - 1];
  p.truth = {{m, n, labels}, static_cast<int>(constants.size())};
  p.constants = std::move(constants);
  p.descriptor = std::move(descriptor);
  return p;
}

}  // namespace

Shape parse_shape(const std::string& s) {
  if (s == "disk") return Shape::disk;
  if (s == "bars") return Shape::bars;
  if (s == "text") return Shape::text;
  throw std::invalid_argument("unknown phantom shape '" + s + "' (expected disk, bars or text)");
}

std::string to_string(Shape s) {
  switch (s) {
    case Shape::disk: return "disk";
    case Shape::bars: return "bars";
    case Shape::text: return "text";
  }
  return "unknown";
}

Phantom make_two_phase(int m, int n, Shape shape, double c0, double c1, double feature_size) {
  check_size(m, n);
  check_constants({c0, c1});
  double size = feature_size;
  if (size < 0.0) {
    switch (shape) {
      case Shape::disk: size = 0.3 * std::min(m, n); break;
      case Shape::bars: size = std::max(1, n / 8); break;
      case Shape::text: size = 0.0; break;
    }
  }
  if (shape == Shape::bars && size < 1.0) throw std::invalid_argument("phantom: bar width must be >= 1");

  std::vector<int> labels(static_cast<std::size_t>(m) * n, 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      bool fg = false;
      switch (shape) {
        case Shape::disk: fg = in_disk(i, j, m, n, size); break;
        case Shape::bars: fg = (j / static_cast<int>(size)) % 2 == 1; break;
        case Shape::text: fg = in_text(i, j, m, n, size); break;
      }
      labels[static_cast<std::size_t>(i) * n + j] = fg ? 2 : 1;
    }
  std::ostringstream d;
  d << "two-phase " << to_string(shape) << ' ' << m << 'x' << n << " size=" << size << " c=" << c0 << ',' << c1;
  return assemble(m, n, {c0, c1}, labels, d.str());
}

Phantom make_three_phase(int m, int n, double c0, double c1, double c2, double outer_radius, double inner_half_side) {
  check_size(m, n);
  check_constants({c0, c1, c2});
  const double r = outer_radius < 0.0 ? 0.4 * std::min(m, n) : outer_radius;
  const double h = inner_half_side < 0.0 ? 0.15 * std::min(m, n) : inner_half_side;

  std::vector<int> labels(static_cast<std::size_t>(m) * n, 1);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      int l = 1;
      if (in_disk(i, j, m, n, r)) l = 2;
      const double di = i + 0.5 - m / 2.0, dj = j + 0.5 - n / 2.0;
      if (l == 2 && std::abs(di) < h && std::abs(dj) < h) l = 3;
      labels[static_cast<std::size_t>(i) * n + j] = l;
    }
  std::ostringstream d;
  d << "three-phase " << m << 'x' << n << " radius=" << r << " half_side=" << h << " c=" << c0 << ',' << c1 << ','
    << c2;
  return assemble(m, n, {c0, c1, c2}, labels, d.str());
}

}  // namespace htvseg::phantom
