#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "core/audio.hpp"

namespace soundscape {

enum class Window { hamming, hann, rectangular };

Window window_from_name(const std::string& name);
std::string window_name(Window w);
std::vector<double> make_window(Window w, std::size_t n);

// Averaged-periodogram settings. segment_length 0 means "one second", i.e.
// the recording's sample rate; the paper fixes no parameters, these defaults
// follow common practice for 22.05 kHz field audio.
struct WelchParams {
  std::size_t segment_length = 0;
  double overlap = 0.5;  // fraction in [0, 1)
  Window window = Window::hamming;
};

// One-sided power spectral density on a uniform frequency grid spanning
// [0, sample_rate/2], in units of power per Hz.
struct PsdEstimate {
  std::vector<double> freqs;
  std::vector<double> power;
  WelchParams params;
  int sample_rate = 0;
};

// Raw band power integrated per 1-kHz band over [1, 11] kHz, then divided
// by the total so the ten bins sum to one. bins[i] covers
// [(i+1), (i+2)) kHz. normalization is the total raw power before dividing.
struct BinnedPsd {
  std::array<double, 10> bins{};
  double normalization = 0.0;
};

struct StftParams {
  std::size_t window_length = 512;
  double overlap = 0.5;
  Window window = Window::hamming;
};

// Magnitude short-time Fourier transform, frames by frequency bins.
struct Spectrogram {
  std::vector<double> times;  // seconds, frame centers
  std::vector<double> freqs;  // Hz
  Eigen::MatrixXd magnitude;  // times.size() x freqs.size()
  StftParams params;
  // Peak magnitude a full-scale bin-centered sine could attain with this
  // window: sum(w)/2. Reference for absolute dBFS thresholds.
  double full_scale = 0.0;
};

PsdEstimate welch_psd(const AudioBuffer& audio, const WelchParams& params);
BinnedPsd bin_psd(const PsdEstimate& psd);
Spectrogram spectrogram(const AudioBuffer& audio, const StftParams& params);

}  // namespace soundscape
