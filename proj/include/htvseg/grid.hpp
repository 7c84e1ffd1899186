#pragma once

#include <cmath>

#include "htvseg/field.hpp"

/// Periodic finite differences on an m x n grid and their adjoints.
///
/// Sign conventions:
///   <grad u, p>  = -<u, div p>
///   <grad2 u, p> = +<u, div2 p>
/// so that div grad and div2 grad2 are the operators that appear in the
/// restoration normal equations.
namespace htvseg::grid {

/// u(i+1, j) - u(i, j), row m wraps to row 1.
ScalarField forward_x(const ScalarField& u);
/// u(i, j+1) - u(i, j), column n wraps to column 1.
ScalarField forward_y(const ScalarField& u);
/// u(i, j) - u(i-1, j), row 1 wraps to row m.
ScalarField backward_x(const ScalarField& u);
/// u(i, j) - u(i, j-1), column 1 wraps to column n.
ScalarField backward_y(const ScalarField& u);

/// (D+x u, D+y u)
Vec2Field grad(const ScalarField& u);

/// (D-x D+x u, D-x D+y u, D+y D-x u, D+y D-y u)
Vec4Field grad2(const ScalarField& u);

/// D-x p_x + D-y p_y, the negative adjoint of grad.
ScalarField div(const Vec2Field& p);

/// Exact adjoint of grad2:
///   D-x D+x p_xx + D-y D+x p_xy + D+x D-y p_yx + D+y D-y p_yy
ScalarField div2(const Vec4Field& p);

/// Sum over pixels of the per-pixel Euclidean magnitude.
template <std::size_t C>
double norm_l1_iso(const VecField<C>& p) {
  const std::size_t n = p.comp[0].size();
  std::vector<double> mag(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t c = 0; c < C; ++c) s += p.comp[c][k] * p.comp[c][k];
    mag[k] = std::sqrt(s);
  }
  return pairwise_sum(mag);
}

/// Weighted variant: sum over pixels of w(x) * |p(x)|.
template <std::size_t C>
double norm_l1_iso(const VecField<C>& p, const ScalarField& w) {
  require_same_shape(p.comp[0], w, "norm_l1_iso");
  const std::size_t n = w.size();
  std::vector<double> mag(n);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t c = 0; c < C; ++c) s += p.comp[c][k] * p.comp[c][k];
    mag[k] = w[k] * std::sqrt(s);
  }
  return pairwise_sum(mag);
}

/// Frobenius norm over all pixels and components.
inline double norm_l2(const ScalarField& u) { return std::sqrt(inner(u, u)); }
template <std::size_t C>
double norm_l2(const VecField<C>& p) {
  return std::sqrt(inner(p, p));
}

}  // namespace htvseg::grid
