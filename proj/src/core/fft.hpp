#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace soundscape {

// Real-to-complex FFT of a fixed size, backed by FFTW with FFTW_ESTIMATE
// plans (deterministic plan choice; no wisdom, so results are bit-stable
// across runs). Plan creation is serialized internally; instances own their
// buffers and are not shareable across threads — each worker makes its own.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  // out must hold n/2 + 1 bins.
  void forward(std::span<const double> in, std::span<std::complex<double>> out);

 private:
  std::size_t n_;
  void* plan_;
  double* in_;
  void* out_;
};

// In-place complex FFT pair used for the analytic signal.
class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);
  ~ComplexFft();
  ComplexFft(const ComplexFft&) = delete;
  ComplexFft& operator=(const ComplexFft&) = delete;

  std::size_t size() const { return n_; }
  void forward(std::span<std::complex<double>> data);
  // Unnormalized inverse; caller divides by n.
  void inverse(std::span<std::complex<double>> data);

 private:
  std::size_t n_;
  void* fwd_;
  void* inv_;
  void* buf_;
};

// Magnitude of the analytic signal (Hilbert envelope) of x.
std::vector<double> analytic_envelope(std::span<const double> x);

}  // namespace soundscape
