#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "htvseg/fft.hpp"
#include "htvseg/field.hpp"

namespace htvseg {

/// Odd-sized, nonnegative, unit-sum convolution kernel. The middle tap is the
/// origin.
class BlurKernel {
 public:
  BlurKernel(int rows, int cols, std::vector<double> taps);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double operator()(int i, int j) const { return taps_[static_cast<std::size_t>(i) * cols_ + j]; }
  const std::vector<double>& taps() const { return taps_; }

  BlurKernel transposed() const;

 private:
  int rows_;
  int cols_;
  std::vector<double> taps_;
};

/// s x s sampled isotropic Gaussian, normalized. Throws for even/nonpositive s
/// or sigma_g <= 0.
BlurKernel gaussian_kernel(int s, double sigma_g);

/// Line segment of the given length through the center at angle theta
/// (degrees, counter-clockwise from the +column axis). ceil(length) equally
/// spaced samples along the segment are splatted with bilinear weights.
BlurKernel motion_kernel(double length, double theta_deg);

/// Kernel dump: "rows cols" on the first line, then one row of taps per line.
void write_kernel(std::ostream& os, const BlurKernel& k);
BlurKernel read_kernel(std::istream& is);

/// Degradation operator: identity or periodic convolution with a kernel.
class LinearOperatorA {
 public:
  enum class Kind { identity, convolution };

  /// |H(k)| below this counts as a null direction.
  static constexpr double kKernelTolerance = 1e-12;

  static LinearOperatorA identity(int rows, int cols);
  static LinearOperatorA convolution(const BlurKernel& kernel, int rows, int cols);

  Kind kind() const { return kind_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const Spectrum& transfer() const { return transfer_; }
  const std::optional<BlurKernel>& kernel() const { return kernel_; }

  /// True iff no transfer coefficient has magnitude below kKernelTolerance.
  bool trivial_kernel() const { return trivial_kernel_; }

  ScalarField apply(const ScalarField& g) const;
  ScalarField apply_adjoint(const ScalarField& u) const;

 private:
  LinearOperatorA(Kind kind, int rows, int cols) : kind_(kind), rows_(rows), cols_(cols) {}
  ScalarField filter(const ScalarField& g, bool conjugate) const;

  Kind kind_;
  int rows_;
  int cols_;
  std::optional<BlurKernel> kernel_;
  Spectrum transfer_;
  bool trivial_kernel_ = true;
};

/// g + eta with eta i.i.d. N(0, variance); no clipping. Deterministic in seed.
ScalarField add_gaussian_noise(const ScalarField& g, double variance, std::uint64_t seed);

}  // namespace htvseg
