#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace soundscape {

// Decoded mono recording. Samples are scaled to [-1, 1] by dividing the
// 16-bit integers by 32768, so -32768 maps to exactly -1.0.
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;

  double duration() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

inline constexpr int kMinSampleRate = 22050;  // must cover the 11 kHz band

// Strict reader: RIFF/WAVE, PCM 16-bit signed little-endian, mono,
// sample rate >= 22050 Hz. No downmixing, no resampling.
AudioBuffer read_wav(const std::string& path);

// Validating constructor for in-memory signals (FFI, tests, synthesis).
AudioBuffer make_buffer(std::span<const double> samples, int sample_rate);

// 16-bit PCM writer used for synthetic fixtures; values clamped to [-1, 1].
void write_wav(const std::string& path, std::span<const double> samples,
               int sample_rate);

}  // namespace soundscape
