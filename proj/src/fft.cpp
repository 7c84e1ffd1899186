#include "htvseg/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>
#include <utility>

namespace htvseg {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft2d::Fft2d(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("Fft2d: dimensions must be positive");
  const std::size_t n = static_cast<std::size_t>(rows) * cols;
  auto* buf = fftw_alloc_complex(n);
  if (buf == nullptr) throw std::bad_alloc();
  buffer_ = buf;
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_2d(rows, cols, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_2d(rows, cols, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft2d::~Fft2d() { release(); }

Fft2d::Fft2d(Fft2d&& other) noexcept
    : rows_(other.rows_),
      cols_(other.cols_),
      buffer_(std::exchange(other.buffer_, nullptr)),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      inverse_plan_(std::exchange(other.inverse_plan_, nullptr)) {}

Fft2d& Fft2d::operator=(Fft2d&& other) noexcept {
  if (this != &other) {
    release();
    rows_ = other.rows_;
    cols_ = other.cols_;
    buffer_ = std::exchange(other.buffer_, nullptr);
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    inverse_plan_ = std::exchange(other.inverse_plan_, nullptr);
  }
  return *this;
}

void Fft2d::release() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
  if (buffer_) fftw_free(buffer_);
  forward_plan_ = inverse_plan_ = buffer_ = nullptr;
}

Spectrum Fft2d::forward(const ScalarField& u) {
  if (u.rows() != rows_ || u.cols() != cols_) throw std::invalid_argument("Fft2d::forward: shape mismatch");
  auto* buf = static_cast<fftw_complex*>(buffer_);
  const std::size_t n = u.size();
  for (std::size_t k = 0; k < n; ++k) {
    buf[k][0] = u[k];
    buf[k][1] = 0.0;
  }
  fftw_execute(static_cast<fftw_plan>(forward_plan_));
  Spectrum out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = {buf[k][0], buf[k][1]};
  return out;
}

ScalarField Fft2d::inverse(const Spectrum& s) {
  const std::size_t n = static_cast<std::size_t>(rows_) * cols_;
  if (s.size() != n) throw std::invalid_argument("Fft2d::inverse: size mismatch");
  auto* buf = static_cast<fftw_complex*>(buffer_);
  for (std::size_t k = 0; k < n; ++k) {
    buf[k][0] = s[k].real();
    buf[k][1] = s[k].imag();
  }
  fftw_execute(static_cast<fftw_plan>(inverse_plan_));
  ScalarField out(rows_, cols_);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = buf[k][0] * scale;
  return out;
}

}  // namespace htvseg
