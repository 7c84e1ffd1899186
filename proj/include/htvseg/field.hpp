#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace htvseg {

/// Dense m x n real field stored row-major. Row index i is the "x" axis of the
/// difference operators, column index j is the "y" axis.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int rows, int cols, double fill = 0.0);
  ScalarField(int rows, int cols, std::vector<double> values);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * cols_ + j]; }
  double& operator[](std::size_t k) { return values_[k]; }
  double operator[](std::size_t k) const { return values_[k]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& data() const { return values_; }

  bool same_shape(const ScalarField& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool all_finite() const;
  double min() const;
  double max() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Per-pixel C-vector field, one ScalarField plane per component.
template <std::size_t C>
struct VecField {
  std::array<ScalarField, C> comp;

  VecField() = default;
  VecField(int rows, int cols, double fill = 0.0) {
    for (auto& c : comp) c = ScalarField(rows, cols, fill);
  }

  static constexpr std::size_t components = C;
  int rows() const { return comp[0].rows(); }
  int cols() const { return comp[0].cols(); }
  ScalarField& operator[](std::size_t c) { return comp[c]; }
  const ScalarField& operator[](std::size_t c) const { return comp[c]; }

  bool all_finite() const {
    for (const auto& c : comp)
      if (!c.all_finite()) return false;
    return true;
  }

  VecField& operator+=(const VecField& o) {
    for (std::size_t c = 0; c < C; ++c) comp[c] += o.comp[c];
    return *this;
  }
  VecField& operator-=(const VecField& o) {
    for (std::size_t c = 0; c < C; ++c) comp[c] -= o.comp[c];
    return *this;
  }
  VecField& operator*=(double s) {
    for (auto& c : comp) c *= s;
    return *this;
  }
  friend VecField operator+(VecField a, const VecField& b) { return a += b; }
  friend VecField operator-(VecField a, const VecField& b) { return a -= b; }
  friend VecField operator*(double s, VecField a) { return a *= s; }
  friend bool operator==(const VecField&, const VecField&) = default;
};

/// Gradient-shaped field: (x-part, y-part).
using Vec2Field = VecField<2>;
/// Hessian-shaped field: (xx, xy, yx, yy).
using Vec4Field = VecField<4>;

/// Pairwise (cascade) summation in index order. The split points depend only
/// on the length, so results are reproducible for a given input.
double pairwise_sum(std::span<const double> x);

/// Sum of x[k]*y[k] with the same pairwise order as pairwise_sum.
double dot(std::span<const double> x, std::span<const double> y);

double inner(const ScalarField& a, const ScalarField& b);

/// Components are reduced independently and then summed in component order.
template <std::size_t C>
double inner(const VecField<C>& a, const VecField<C>& b) {
  double s = 0.0;
  for (std::size_t c = 0; c < C; ++c) s += inner(a.comp[c], b.comp[c]);
  return s;
}

void require_same_shape(const ScalarField& a, const ScalarField& b, const char* what);

}  // namespace htvseg
