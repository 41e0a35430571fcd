#include "core/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

#include "core/errors.hpp"

namespace soundscape {

namespace {
// The FFTW planner is not thread-safe; plan execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n < 2) throw NumericalError("FFT size must be >= 2");
  in_ = fftw_alloc_real(n);
  auto* out = fftw_alloc_complex(n / 2 + 1);
  out_ = out;
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out, FFTW_ESTIMATE);
  if (plan_ == nullptr) throw NumericalError("FFTW r2c plan failed");
}

RealFft::~RealFft() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  }
  fftw_free(in_);
  fftw_free(out_);
}

void RealFft::forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  std::memcpy(in_, in.data(), n_ * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(plan_));
  std::memcpy(out.data(), out_, (n_ / 2 + 1) * sizeof(std::complex<double>));
}

ComplexFft::ComplexFft(std::size_t n) : n_(n) {
  if (n < 2) throw NumericalError("FFT size must be >= 2");
  auto* buf = fftw_alloc_complex(n);
  buf_ = buf;
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD,
                          FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD,
                          FFTW_ESTIMATE);
  if (fwd_ == nullptr || inv_ == nullptr)
    throw NumericalError("FFTW c2c plan failed");
}

ComplexFft::~ComplexFft() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
  }
  fftw_free(buf_);
}

void ComplexFft::forward(std::span<std::complex<double>> data) {
  std::memcpy(buf_, data.data(), n_ * sizeof(std::complex<double>));
  fftw_execute(static_cast<fftw_plan>(fwd_));
  std::memcpy(data.data(), buf_, n_ * sizeof(std::complex<double>));
}

void ComplexFft::inverse(std::span<std::complex<double>> data) {
  std::memcpy(buf_, data.data(), n_ * sizeof(std::complex<double>));
  fftw_execute(static_cast<fftw_plan>(inv_));
  std::memcpy(data.data(), buf_, n_ * sizeof(std::complex<double>));
}

std::vector<double> analytic_envelope(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw WindowError("signal too short for envelope");
  std::vector<std::complex<double>> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = x[i];

  ComplexFft fft(n);
  fft.forward(z);

  // One-sided spectrum: keep DC (and Nyquist for even n), double the
  // positive frequencies, zero the negative ones.
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < half; ++k) z[k] *= 2.0;
  if (n % 2 != 0) z[half] *= 2.0;
  for (std::size_t k = half + 1; k < n; ++k) z[k] = 0.0;

  fft.inverse(z);
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(z[i]) / n;
  return env;
}

}  // namespace soundscape
