#pragma once

// Shared oracles and fixtures for the test suites. Everything here is
// independent of the library implementation paths it checks: the DFT is a
// direct O(n^2) evaluation, the KS machinery is self-contained, and the
// WAV fixtures are assembled byte by byte from the RIFF layout.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace test_support {

// ---------------------------------------------------------------- signals

inline std::vector<double> tone(double freq_hz, double amplitude,
                                double seconds, int sample_rate,
                                double phase = 0.0) {
  const auto n = static_cast<std::size_t>(seconds * sample_rate);
  std::vector<double> x(n);
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate;
  for (std::size_t i = 0; i < n; ++i)
    x[i] = amplitude * std::sin(w * static_cast<double>(i) + phase);
  return x;
}

inline std::vector<double> white_noise(double amplitude, double seconds,
                                       int sample_rate, uint64_t seed) {
  const auto n = static_cast<std::size_t>(seconds * sample_rate);
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  std::vector<double> x(n);
  for (auto& v : x) v = u(gen);
  return x;
}

inline void add(std::vector<double>& x, const std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) x[i] += y[i];
}

// A tone whose phase advances by an integer number of cycles per hop, so
// every STFT frame sees bit-identical samples.
inline double hop_locked_freq(int sample_rate, std::size_t hop, int m) {
  return static_cast<double>(m) * sample_rate / static_cast<double>(hop);
}

// ---------------------------------------------------------------- oracles

// Direct DFT bin: sum_k x[k] exp(-2 pi i j k / n).
inline std::complex<double> dft_bin(const std::vector<double>& x,
                                    std::size_t j) {
  const double w = -2.0 * std::numbers::pi * static_cast<double>(j) /
                   static_cast<double>(x.size());
  long double re = 0.0L, im = 0.0L;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = w * static_cast<double>(k);
    re += x[k] * std::cos(a);
    im += x[k] * std::sin(a);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

inline double mean(const std::vector<double>& x) {
  long double s = 0.0L;
  for (double v : x) s += v;
  return static_cast<double>(s / static_cast<long double>(x.size()));
}

inline double variance(const std::vector<double>& x) {
  const double m = mean(x);
  long double s = 0.0L;
  for (double v : x) s += (v - m) * (v - m);
  return static_cast<double>(s / static_cast<long double>(x.size() - 1));
}

// ------------------------------------------------------------- KS test

inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::fabs(fa - fb));
  }
  return d;
}

// Asymptotic two-sample KS p-value with the small-sample correction.
inline double ks_pvalue(double d, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * static_cast<double>(m) /
                    static_cast<double>(n + m);
  const double rt = std::sqrt(ne);
  const double lambda = (rt + 0.12 + 0.11 / rt) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    p += sign * 2.0 * std::exp(-2.0 * lambda * lambda * k * k);
    sign = -sign;
  }
  return std::clamp(p, 0.0, 1.0);
}

inline double ks_test(const std::vector<double>& a,
                      const std::vector<double>& b) {
  return ks_pvalue(ks_statistic(a, b), a.size(), b.size());
}

// ------------------------------------------------------------ fixtures

class TempDir {
 public:
  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int attempt = 0; attempt < 100; ++attempt) {
      auto candidate =
          base / ("soundscape_test_" + std::to_string(counter()++));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp dir");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

// Hand-assembled RIFF/WAVE bytes (independent of the library's writer).
struct WavSpec {
  uint16_t format = 1;      // PCM
  uint16_t channels = 1;
  uint32_t sample_rate = 22050;
  uint16_t bits = 16;
  std::vector<int16_t> samples;  // interleaved when channels > 1
};

inline void write_raw_wav(const std::string& path, const WavSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  auto u32 = [&](uint32_t v) {
    char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                 static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
    out.write(b, 4);
  };
  auto u16 = [&](uint16_t v) {
    char b[2] = {static_cast<char>(v), static_cast<char>(v >> 8)};
    out.write(b, 2);
  };
  const uint32_t data_size =
      static_cast<uint32_t>(spec.samples.size() * sizeof(int16_t));
  out.write("RIFF", 4);
  u32(36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  u32(16);
  u16(spec.format);
  u16(spec.channels);
  u32(spec.sample_rate);
  u32(spec.sample_rate * spec.channels * spec.bits / 8);
  u16(static_cast<uint16_t>(spec.channels * spec.bits / 8));
  u16(spec.bits);
  out.write("data", 4);
  u32(data_size);
  for (int16_t s : spec.samples) u16(static_cast<uint16_t>(s));
}

}  // namespace test_support
