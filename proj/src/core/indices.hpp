#pragma once

#include <array>
#include <string>
#include <vector>

#include "core/audio.hpp"
#include "core/spectral.hpp"

namespace soundscape {

// Canonical index order used everywhere a 14-vector appears: response
// stacking, CSV columns, model coefficient blocks.
inline constexpr int kNumIndices = 14;
const std::vector<std::string>& index_names();  // H, ACI, NDSI, AEI, PSD1..10

struct IndexParams {
  WelchParams welch;              // 1 s segments, 50% overlap, Hamming
  StftParams stft;                // 512 samples, 50% overlap, Hamming
  double aei_threshold_db = -50;  // dB re full-scale sine
  double aei_max_freq = 10000.0;  // Hz; ten 1-kHz occupancy bands
};

// Raw values of the four composite indices and ten PSD bins, plus the
// transforms the models consume (logit for all but ACI, natural log for ACI).
struct IndexRecord {
  double h = 0, aci = 0, ndsi = 0, aei = 0;
  std::array<double, 10> psd{};
  double t_h = 0, t_aci = 0, t_ndsi = 0, t_aei = 0;
  std::array<double, 10> t_psd{};

  // In canonical index order.
  std::array<double, kNumIndices> raw() const;
  std::array<double, kNumIndices> transformed() const;
};

// (biophony - anthrophony) / (biophony + anthrophony): anthrophony is the
// 1-2 kHz bin, biophony the 2-11 kHz bins. Bins sum to one, so the
// denominator is one.
double ndsi(const BinnedPsd& b);

double temporal_entropy(const AudioBuffer& audio);
double spectral_entropy(const Spectrogram& spec);
// Product of temporal and spectral entropy, each normalized to [0, 1].
double acoustic_entropy(const AudioBuffer& audio, const StftParams& stft);

// Gini coefficient of per-band fractions of spectrogram cells above
// threshold_db (dB re spec.full_scale), over 1-kHz bands in [0, max_freq).
double acoustic_evenness(const Spectrogram& spec, double threshold_db,
                         double max_freq);

// Sum over frequency bins of (sum of absolute successive-frame magnitude
// differences) / (total magnitude), whole recording as a single clump.
double acoustic_complexity(const Spectrogram& spec);

// log((x - a) / (b - x)). Throws BoundaryError when x is on or outside
// the bounds; the transform is undefined there.
double bounded_logit(double x, double a, double b);
double bounded_logit_inv(double z, double a, double b);

IndexRecord compute_all(const AudioBuffer& audio, const IndexParams& params);

}  // namespace soundscape
