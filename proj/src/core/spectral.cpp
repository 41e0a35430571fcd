#include "core/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "core/errors.hpp"
#include "core/fft.hpp"

namespace soundscape {

Window window_from_name(const std::string& name) {
  if (name == "hamming") return Window::hamming;
  if (name == "hann") return Window::hann;
  if (name == "rectangular") return Window::rectangular;
  throw ConfigError("unknown window: " + name);
}

std::string window_name(Window w) {
  switch (w) {
    case Window::hamming: return "hamming";
    case Window::hann: return "hann";
    case Window::rectangular: return "rectangular";
  }
  return "?";
}

std::vector<double> make_window(Window w, std::size_t n) {
  std::vector<double> win(n, 1.0);
  if (n == 1) return win;
  const double two_pi = 2.0 * std::numbers::pi;
  switch (w) {
    case Window::hamming:
      for (std::size_t k = 0; k < n; ++k)
        win[k] = 0.54 - 0.46 * std::cos(two_pi * k / (n - 1));
      break;
    case Window::hann:
      for (std::size_t k = 0; k < n; ++k)
        win[k] = 0.5 - 0.5 * std::cos(two_pi * k / (n - 1));
      break;
    case Window::rectangular:
      break;
  }
  return win;
}

namespace {

std::size_t hop_from(std::size_t length, double overlap) {
  if (overlap < 0.0 || overlap >= 1.0)
    throw ConfigError("overlap must be in [0, 1)");
  auto hop = static_cast<std::size_t>(
      std::lround(static_cast<double>(length) * (1.0 - overlap)));
  return std::max<std::size_t>(1, hop);
}

bool all_zero(const std::vector<double>& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

}  // namespace

PsdEstimate welch_psd(const AudioBuffer& audio, const WelchParams& params) {
  const std::size_t n = audio.samples.size();
  std::size_t seg = params.segment_length;
  if (seg == 0) seg = static_cast<std::size_t>(audio.sample_rate);
  if (seg < 2) throw ConfigError("segment_length must be >= 2");
  if (seg > n)
    throw WindowError("segment length " + std::to_string(seg) +
                      " exceeds signal length " + std::to_string(n));
  if (all_zero(audio.samples)) throw SilentRecordingError("all-zero signal");

  const std::size_t hop = hop_from(seg, params.overlap);
  const std::size_t n_segments = (n - seg) / hop + 1;
  const std::size_t n_bins = seg / 2 + 1;

  const std::vector<double> win = make_window(params.window, seg);
  double win_sumsq = 0.0;
  for (double w : win) win_sumsq += w * w;
  // One-sided PSD scaling: |X_k|^2 / (fs * sum(w^2)), interior bins doubled.
  const double scale = 1.0 / (audio.sample_rate * win_sumsq);

  RealFft fft(seg);
  std::vector<double> frame(seg);
  std::vector<std::complex<double>> spec(n_bins);
  std::vector<double> acc(n_bins, 0.0);

  for (std::size_t s = 0; s < n_segments; ++s) {
    const double* x = audio.samples.data() + s * hop;
    for (std::size_t k = 0; k < seg; ++k) frame[k] = x[k] * win[k];
    fft.forward(frame, spec);
    for (std::size_t k = 0; k < n_bins; ++k) acc[k] += std::norm(spec[k]);
  }

  PsdEstimate psd;
  psd.params = params;
  psd.params.segment_length = seg;
  psd.sample_rate = audio.sample_rate;
  psd.freqs.resize(n_bins);
  psd.power.resize(n_bins);
  for (std::size_t k = 0; k < n_bins; ++k) {
    psd.freqs[k] = static_cast<double>(k) * audio.sample_rate / seg;
    double p = acc[k] / n_segments * scale;
    if (k != 0 && !(seg % 2 == 0 && k == n_bins - 1)) p *= 2.0;  // one-sided
    psd.power[k] = p;
  }
  return psd;
}

BinnedPsd bin_psd(const PsdEstimate& psd) {
  if (psd.freqs.empty() || psd.freqs.back() < 11000.0)
    throw ConfigError("PSD grid does not cover 11 kHz");
  const double df = psd.freqs.size() > 1 ? psd.freqs[1] - psd.freqs[0] : 0.0;

  BinnedPsd out;
  std::array<double, 10> raw{};
  for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
    const double f = psd.freqs[k];
    if (f < 1000.0 || f >= 11000.0) continue;
    auto band = static_cast<std::size_t>(f / 1000.0) - 1;
    raw[band] += psd.power[k] * df;
  }
  double total = 0.0;
  for (double r : raw) total += r;
  if (total <= 0.0)
    throw SilentRecordingError("zero power in the 1-11 kHz range");
  for (std::size_t i = 0; i < raw.size(); ++i) out.bins[i] = raw[i] / total;
  out.normalization = total;
  return out;
}

Spectrogram spectrogram(const AudioBuffer& audio, const StftParams& params) {
  const std::size_t n = audio.samples.size();
  const std::size_t len = params.window_length;
  if (len < 2) throw ConfigError("window_length must be >= 2");
  if (len > n)
    throw WindowError("window length " + std::to_string(len) +
                      " exceeds signal length " + std::to_string(n));

  const std::size_t hop = hop_from(len, params.overlap);
  const std::size_t n_frames = (n - len) / hop + 1;
  const std::size_t n_bins = len / 2 + 1;

  const std::vector<double> win = make_window(params.window, len);
  double win_sum = 0.0;
  for (double w : win) win_sum += w;

  RealFft fft(len);
  std::vector<double> frame(len);
  std::vector<std::complex<double>> spec(n_bins);

  Spectrogram sg;
  sg.params = params;
  sg.full_scale = win_sum / 2.0;
  sg.times.resize(n_frames);
  sg.freqs.resize(n_bins);
  sg.magnitude.resize(static_cast<Eigen::Index>(n_frames),
                      static_cast<Eigen::Index>(n_bins));
  for (std::size_t k = 0; k < n_bins; ++k)
    sg.freqs[k] = static_cast<double>(k) * audio.sample_rate / len;

  for (std::size_t t = 0; t < n_frames; ++t) {
    const double* x = audio.samples.data() + t * hop;
    for (std::size_t k = 0; k < len; ++k) frame[k] = x[k] * win[k];
    fft.forward(frame, spec);
    for (std::size_t k = 0; k < n_bins; ++k)
      sg.magnitude(static_cast<Eigen::Index>(t),
                   static_cast<Eigen::Index>(k)) = std::abs(spec[k]);
    sg.times[t] = (t * hop + len / 2.0) / audio.sample_rate;
  }
  return sg;
}

}  // namespace soundscape
