#pragma once

#include <complex>
#include <vector>

#include "htvseg/field.hpp"

namespace htvseg {

using Spectrum = std::vector<std::complex<double>>;

/// Unnormalized forward / normalized inverse 2-D DFT on a fixed grid, backed by
/// FFTW with estimate-mode plans on aligned buffers so repeated runs are
/// bitwise reproducible. Not thread-safe per instance.
class Fft2d {
 public:
  Fft2d(int rows, int cols);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;
  Fft2d(Fft2d&& other) noexcept;
  Fft2d& operator=(Fft2d&& other) noexcept;

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Spectrum forward(const ScalarField& u);
  /// Real part of the inverse transform, divided by rows*cols.
  ScalarField inverse(const Spectrum& s);

 private:
  void release();

  int rows_ = 0;
  int cols_ = 0;
  void* buffer_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

/// Transfer function of a periodic linear operator: the DFT of its response
/// to a unit impulse at (0, 0).
template <class Op>
Spectrum impulse_symbol(int rows, int cols, const Op& op) {
  ScalarField delta(rows, cols, 0.0);
  delta(0, 0) = 1.0;
  Fft2d fft(rows, cols);
  return fft.forward(op(delta));
}

}  // namespace htvseg
