#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "htvseg/degrade.hpp"
#include "htvseg/fft.hpp"
#include "oracles.hpp"

using namespace htvseg;

TEST_CASE("fft round trip") {
  std::mt19937_64 rng(5);
  for (auto [m, n] : {std::pair{1, 1}, std::pair{3, 7}, std::pair{16, 16}}) {
    const auto u = oracle::random_field(m, n, rng);
    Fft2d fft(m, n);
    const auto back = fft.inverse(fft.forward(u));
    for (std::size_t k = 0; k < u.size(); ++k) CHECK(back[k] == doctest::Approx(u[k]).epsilon(1e-13));
  }
}

TEST_CASE("gaussian kernel") {
  CHECK(gaussian_kernel(1, 2.0).taps() == std::vector<double>{1.0});
  const auto flat = gaussian_kernel(3, 1e6);
  for (double t : flat.taps()) CHECK(std::abs(t - 1.0 / 9.0) < 1e-6);

  const auto k = gaussian_kernel(5, 5.0);
  double total = 0.0;
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y) total += std::exp(-(x * x + y * y) / 50.0);
  for (int x = -2; x <= 2; ++x)
    for (int y = -2; y <= 2; ++y) CHECK(std::abs(k(x + 2, y + 2) - std::exp(-(x * x + y * y) / 50.0) / total) < 1e-12);

  CHECK_THROWS_AS(gaussian_kernel(4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_kernel(3, 0.0), std::invalid_argument);
}

TEST_CASE("motion kernel") {
  for (double theta : {0.0, 33.0, 90.0}) {
    const auto k = motion_kernel(1.0, theta);
    CHECK(k.rows() == 1);
    CHECK(k.cols() == 1);
    CHECK(k(0, 0) == 1.0);
  }
  const auto h = motion_kernel(5.0, 0.0);
  CHECK(h.rows() * h.cols() >= 5);
  const int c = h.rows() / 2;
  for (int j = 0; j < h.cols(); ++j) CHECK(h(c, j) == doctest::Approx(0.2));
  double off = 0.0;
  for (int i = 0; i < h.rows(); ++i)
    if (i != c)
      for (int j = 0; j < h.cols(); ++j) off += h(i, j);
  CHECK(off == 0.0);

  const auto v = motion_kernel(5.0, 90.0);
  const int cc = v.cols() / 2;
  for (int i = 0; i < v.rows(); ++i) CHECK(v(i, cc) == doctest::Approx(0.2));

  const auto d = motion_kernel(7.5, 30.0);
  double sum = 0.0;
  for (double t : d.taps()) {
    CHECK(t >= 0.0);
    sum += t;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(motion_kernel(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("kernel dump round trip") {
  const auto k = motion_kernel(6.0, 45.0);
  std::stringstream ss;
  write_kernel(ss, k);
  const auto r = read_kernel(ss);
  CHECK(r.rows() == k.rows());
  CHECK(r.taps() == k.taps());
}

TEST_CASE("blur kernel validation") {
  CHECK_THROWS_AS(BlurKernel(2, 1, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(BlurKernel(1, 3, {0.5, 0.6, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(BlurKernel(1, 3, {0.5, 0.6, 0.1}), std::invalid_argument);
}

TEST_CASE("identity and delta operators leave the image unchanged") {
  std::mt19937_64 rng(8);
  const auto g = oracle::random_field(9, 6, rng);
  CHECK(LinearOperatorA::identity(9, 6).apply(g) == g);
  CHECK(LinearOperatorA::identity(9, 6).apply_adjoint(g) == g);
  const auto delta = LinearOperatorA::convolution(BlurKernel(3, 3, {0, 0, 0, 0, 1, 0, 0, 0, 0}), 9, 6);
  const auto out = delta.apply(g);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(out[k] == doctest::Approx(g[k]).epsilon(1e-14));
}

TEST_CASE("convolution matches spatial periodic convolution") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (auto [m, n] : {std::pair{7, 9}, std::pair{3, 3}, std::pair{12, 5}}) {
    std::vector<double> taps(15);
    double s = 0.0;
    for (auto& t : taps) s += (t = U(rng));
    for (auto& t : taps) t /= s;
    const BlurKernel k(3, 5, taps);
    const auto A = LinearOperatorA::convolution(k, m, n);
    const auto g = oracle::random_field(m, n, rng);
    const auto fast = A.apply(g);
    const auto slow = oracle::convolve(g, 3, 5, taps);
    const auto fast_t = A.apply_adjoint(g);
    const auto slow_t = oracle::correlate(g, 3, 5, taps);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(fast[i] - slow[i]) < 1e-12);
      CHECK(std::abs(fast_t[i] - slow_t[i]) < 1e-12);
    }
  }
}

TEST_CASE("symmetric gaussian blur is self-adjoint") {
  std::mt19937_64 rng(21);
  const auto A = LinearOperatorA::convolution(gaussian_kernel(5, 1.5), 20, 17);
  const auto u = oracle::random_field(20, 17, rng);
  const auto a = A.apply(u), b = A.apply_adjoint(u);
  for (std::size_t k = 0; k < u.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-13);
}

TEST_CASE("box blur on an even grid has a null direction") {
  const auto A = LinearOperatorA::convolution(BlurKernel(1, 3, {1.0 / 3, 1.0 / 3, 1.0 / 3}), 6, 6);
  CHECK_FALSE(A.trivial_kernel());
  CHECK(LinearOperatorA::identity(4, 4).trivial_kernel());
}

TEST_CASE("gaussian noise") {
  std::mt19937_64 rng(1);
  const auto g = oracle::random_field(256, 256, rng, 0.0, 1.0);
  CHECK(add_gaussian_noise(g, 0.0, 42) == g);
  const auto a = add_gaussian_noise(g, 0.01, 42);
  CHECK(a == add_gaussian_noise(g, 0.01, 42));
  CHECK_FALSE(a == add_gaussian_noise(g, 0.01, 43));
  double mean = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) mean += a[k] - g[k];
  mean /= static_cast<double>(g.size());
  double var = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) var += (a[k] - g[k] - mean) * (a[k] - g[k] - mean);
  var /= static_cast<double>(g.size() - 1);
  CHECK(var >= 0.009);
  CHECK(var <= 0.011);
  CHECK(std::abs(mean) < 0.001);
  CHECK_THROWS_AS(add_gaussian_noise(g, -1.0, 0), std::invalid_argument);
}
