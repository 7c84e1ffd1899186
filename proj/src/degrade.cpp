#include "htvseg/degrade.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace htvseg {

namespace {

constexpr double kSumTolerance = 1e-12;

std::vector<double> normalized(std::vector<double> taps) {
  double sum = 0.0;
  for (double t : taps) sum += t;
  for (double& t : taps) t /= sum;
  return taps;
}

// Zero-pad to rows x cols with the kernel's middle tap moved to (0, 0);
// kernels larger than the grid wrap around.
ScalarField center_shifted(const BlurKernel& k, int rows, int cols) {
  ScalarField out(rows, cols, 0.0);
  const int ci = k.rows() / 2, cj = k.cols() / 2;
  for (int a = 0; a < k.rows(); ++a)
    for (int b = 0; b < k.cols(); ++b) {
      const int i = ((a - ci) % rows + rows) % rows;
      const int j = ((b - cj) % cols + cols) % cols;
      out(i, j) += k(a, b);
    }
  return out;
}

}  // namespace

BlurKernel::BlurKernel(int rows, int cols, std::vector<double> taps)
    : rows_(rows), cols_(cols), taps_(std::move(taps)) {
  if (rows < 1 || cols < 1 || rows % 2 == 0 || cols % 2 == 0)
    throw std::invalid_argument("BlurKernel: dimensions must be odd and positive");
  if (taps_.size() != static_cast<std::size_t>(rows) * cols)
    throw std::invalid_argument("BlurKernel: tap count does not match dimensions");
  double sum = 0.0;
  for (double t : taps_) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("BlurKernel: taps must be finite and nonnegative");
    sum += t;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) throw std::invalid_argument("BlurKernel: taps must sum to 1");
}

BlurKernel BlurKernel::transposed() const {
  std::vector<double> t(taps_.size());
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t[static_cast<std::size_t>(j) * rows_ + i] = (*this)(i, j);
  return BlurKernel(cols_, rows_, std::move(t));
}

BlurKernel gaussian_kernel(int s, double sigma_g) {
  if (s < 1 || s % 2 == 0) throw std::invalid_argument("gaussian_kernel: size must be odd and positive");
  if (!(sigma_g > 0.0)) throw std::invalid_argument("gaussian_kernel: sigma must be positive");
  const int r = s / 2;
  std::vector<double> taps(static_cast<std::size_t>(s) * s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      const double x = a - r, y = b - r;
      taps[static_cast<std::size_t>(a) * s + b] = std::exp(-(x * x + y * y) / (2.0 * sigma_g * sigma_g));
    }
  return BlurKernel(s, s, normalized(std::move(taps)));
}

BlurKernel motion_kernel(double length, double theta_deg) {
  if (!(length >= 1.0) || !std::isfinite(length)) throw std::invalid_argument("motion_kernel: length must be >= 1");
  if (!std::isfinite(theta_deg)) throw std::invalid_argument("motion_kernel: angle must be finite");

  const int samples = static_cast<int>(std::ceil(length));
  const double half = (length - 1.0) / 2.0;
  const int radius = static_cast<int>(std::ceil(half));
  const int size = 2 * radius + 1;

  const double theta = theta_deg * std::numbers::pi / 180.0;
  auto clean = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
  const double dir_i = clean(-std::sin(theta));
  const double dir_j = clean(std::cos(theta));

  std::vector<double> taps(static_cast<std::size_t>(size) * size, 0.0);
  auto splat = [&](int i, int j, double w) {
    if (w <= 0.0) return;
    if (i < 0 || j < 0 || i >= size || j >= size) return;
    taps[static_cast<std::size_t>(i) * size + j] += w;
  };
  for (int k = 0; k < samples; ++k) {
    const double t = samples == 1 ? 0.0 : -half + (2.0 * half) * k / (samples - 1);
    const double pi = radius + clean(t * dir_i);
    const double pj = radius + clean(t * dir_j);
    const double fi = std::floor(pi), fj = std::floor(pj);
    const double wi = pi - fi, wj = pj - fj;
    const int i0 = static_cast<int>(fi), j0 = static_cast<int>(fj);
    splat(i0, j0, (1.0 - wi) * (1.0 - wj));
    splat(i0 + 1, j0, wi * (1.0 - wj));
    splat(i0, j0 + 1, (1.0 - wi) * wj);
    splat(i0 + 1, j0 + 1, wi * wj);
  }
  return BlurKernel(size, size, normalized(std::move(taps)));
}

void write_kernel(std::ostream& os, const BlurKernel& k) {
  const auto old_precision = os.precision(17);
  os << k.rows() << ' ' << k.cols() << '\n';
  for (int i = 0; i < k.rows(); ++i) {
    for (int j = 0; j < k.cols(); ++j) os << (j ? " " : "") << k(i, j);
    os << '\n';
  }
  os.precision(old_precision);
}

BlurKernel read_kernel(std::istream& is) {
  int rows = 0, cols = 0;
  if (!(is >> rows >> cols) || rows < 1 || cols < 1) throw std::runtime_error("read_kernel: malformed header");
  std::vector<double> taps(static_cast<std::size_t>(rows) * cols);
  for (double& t : taps)
    if (!(is >> t)) throw std::runtime_error("read_kernel: truncated tap list");
  return BlurKernel(rows, cols, std::move(taps));
}

LinearOperatorA LinearOperatorA::identity(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("LinearOperatorA: dimensions must be positive");
  LinearOperatorA a(Kind::identity, rows, cols);
  a.transfer_.assign(static_cast<std::size_t>(rows) * cols, {1.0, 0.0});
  return a;
}

LinearOperatorA LinearOperatorA::convolution(const BlurKernel& kernel, int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("LinearOperatorA: dimensions must be positive");
  LinearOperatorA a(Kind::convolution, rows, cols);
  a.kernel_ = kernel;
  Fft2d fft(rows, cols);
  a.transfer_ = fft.forward(center_shifted(kernel, rows, cols));
  for (const auto& h : a.transfer_)
    if (std::abs(h) < kKernelTolerance) a.trivial_kernel_ = false;
  return a;
}

ScalarField LinearOperatorA::filter(const ScalarField& g, bool conjugate) const {
  if (g.rows() != rows_ || g.cols() != cols_)
    throw std::invalid_argument("LinearOperatorA: field shape does not match operator grid");
  if (kind_ == Kind::identity) return g;
  Fft2d fft(rows_, cols_);
  Spectrum s = fft.forward(g);
  for (std::size_t k = 0; k < s.size(); ++k) s[k] *= conjugate ? std::conj(transfer_[k]) : transfer_[k];
  return fft.inverse(s);
}

ScalarField LinearOperatorA::apply(const ScalarField& g) const { return filter(g, false); }
ScalarField LinearOperatorA::apply_adjoint(const ScalarField& u) const { return filter(u, true); }

ScalarField add_gaussian_noise(const ScalarField& g, double variance, std::uint64_t seed) {
  if (!(variance >= 0.0) || !std::isfinite(variance))
    throw std::invalid_argument("add_gaussian_noise: variance must be finite and nonnegative");
  if (variance == 0.0) return g;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, std::sqrt(variance));
  ScalarField out = g;
  for (double& v : out.values()) v += noise(rng);
  return out;
}

}  // namespace htvseg
