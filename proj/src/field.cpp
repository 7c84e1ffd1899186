#include "htvseg/field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace htvseg {

ScalarField::ScalarField(int rows, int cols, double fill) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("ScalarField: dimensions must be positive");
  values_.assign(static_cast<std::size_t>(rows) * cols, fill);
}

ScalarField::ScalarField(int rows, int cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (rows < 1 || cols < 1)
    throw std::invalid_argument("ScalarField: dimensions must be positive");
  if (values_.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("ScalarField: value count does not match dimensions");
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_shape(*this, other, "operator+=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_shape(*this, other, "operator-=");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

namespace {

constexpr std::size_t kPairwiseLeaf = 8;

template <class Term>
double cascade(std::size_t lo, std::size_t hi, const Term& term) {
  if (hi - lo <= kPairwiseLeaf) {
    double s = 0.0;
    for (std::size_t k = lo; k < hi; ++k) s += term(k);
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return cascade(lo, mid, term) + cascade(mid, hi, term);
}

}  // namespace

double pairwise_sum(std::span<const double> x) {
  return cascade(0, x.size(), [&](std::size_t k) { return x[k]; });
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: length mismatch");
  return cascade(0, x.size(), [&](std::size_t k) { return x[k] * y[k]; });
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_shape(a, b, "inner");
  return dot(a.values(), b.values());
}

void require_same_shape(const ScalarField& a, const ScalarField& b, const char* what) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(what) + ": shape mismatch (" + std::to_string(a.rows()) +
                                "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                "x" + std::to_string(b.cols()) + ")");
}

}  // namespace htvseg
