#include "htvseg/grid.hpp"

namespace htvseg::grid {

ScalarField forward_x(const ScalarField& u) {
  const int m = u.rows(), n = u.cols();
  ScalarField out(m, n);
  for (int i = 0; i < m; ++i) {
    const int ip = (i + 1 == m) ? 0 : i + 1;
    for (int j = 0; j < n; ++j) out(i, j) = u(ip, j) - u(i, j);
  }
  return out;
}

ScalarField forward_y(const ScalarField& u) {
  const int m = u.rows(), n = u.cols();
  ScalarField out(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const int jp = (j + 1 == n) ? 0 : j + 1;
      out(i, j) = u(i, jp) - u(i, j);
    }
  return out;
}

ScalarField backward_x(const ScalarField& u) {
  const int m = u.rows(), n = u.cols();
  ScalarField out(m, n);
  for (int i = 0; i < m; ++i) {
    const int im = (i == 0) ? m - 1 : i - 1;
    for (int j = 0; j < n; ++j) out(i, j) = u(i, j) - u(im, j);
  }
  return out;
}

ScalarField backward_y(const ScalarField& u) {
  const int m = u.rows(), n = u.cols();
  ScalarField out(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const int jm = (j == 0) ? n - 1 : j - 1;
      out(i, j) = u(i, j) - u(i, jm);
    }
  return out;
}

Vec2Field grad(const ScalarField& u) {
  Vec2Field g;
  g.comp[0] = forward_x(u);
  g.comp[1] = forward_y(u);
  return g;
}

Vec4Field grad2(const ScalarField& u) {
  Vec4Field h;
  const ScalarField fx = forward_x(u);
  const ScalarField bx = backward_x(u);
  h.comp[0] = backward_x(fx);
  h.comp[1] = backward_x(forward_y(u));
  h.comp[2] = forward_y(bx);
  h.comp[3] = forward_y(backward_y(u));
  return h;
}

ScalarField div(const Vec2Field& p) {
  require_same_shape(p.comp[0], p.comp[1], "div");
  return backward_x(p.comp[0]) + backward_y(p.comp[1]);
}

// Each component's operator is a product of two circulant differences; its
// transpose reverses the order and flips forward<->backward (with two sign
// changes cancelling).
ScalarField div2(const Vec4Field& p) {
  for (std::size_t c = 1; c < 4; ++c) require_same_shape(p.comp[0], p.comp[c], "div2");
  ScalarField out = backward_x(forward_x(p.comp[0]));
  out += backward_y(forward_x(p.comp[1]));
  out += forward_x(backward_y(p.comp[2]));
  out += forward_y(backward_y(p.comp[3]));
  return out;
}

}  // namespace htvseg::grid
