#include "core/indices.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/errors.hpp"
#include "core/fft.hpp"

namespace soundscape {

const std::vector<std::string>& index_names() {
  static const std::vector<std::string> names = {
      "H",    "ACI",  "NDSI", "AEI",  "PSD1", "PSD2", "PSD3",
      "PSD4", "PSD5", "PSD6", "PSD7", "PSD8", "PSD9", "PSD10"};
  return names;
}

std::array<double, kNumIndices> IndexRecord::raw() const {
  std::array<double, kNumIndices> v{h, aci, ndsi, aei};
  std::copy(psd.begin(), psd.end(), v.begin() + 4);
  return v;
}

std::array<double, kNumIndices> IndexRecord::transformed() const {
  std::array<double, kNumIndices> v{t_h, t_aci, t_ndsi, t_aei};
  std::copy(t_psd.begin(), t_psd.end(), v.begin() + 4);
  return v;
}

double ndsi(const BinnedPsd& b) {
  const double anthrophony = b.bins[0];
  double biophony = 0.0;
  for (std::size_t i = 1; i < b.bins.size(); ++i) biophony += b.bins[i];
  return (biophony - anthrophony) / (biophony + anthrophony);
}

namespace {

// Entropy of a nonnegative weight vector normalized to a probability mass,
// divided by log(count) so the result lies in [0, 1].
double normalized_entropy(const std::vector<double>& w) {
  double total = 0.0;
  for (double v : w) total += v;
  if (total <= 0.0) throw SilentRecordingError("zero-mass distribution");
  double ent = 0.0;
  for (double v : w) {
    if (v <= 0.0) continue;
    const double p = v / total;
    ent -= p * std::log(p);
  }
  return ent / std::log(static_cast<double>(w.size()));
}

}  // namespace

double temporal_entropy(const AudioBuffer& audio) {
  if (audio.samples.size() < 2)
    throw WindowError("signal too short for temporal entropy");
  return normalized_entropy(analytic_envelope(audio.samples));
}

double spectral_entropy(const Spectrogram& spec) {
  std::vector<double> mean_spectrum(spec.freqs.size());
  for (Eigen::Index k = 0; k < spec.magnitude.cols(); ++k)
    mean_spectrum[static_cast<std::size_t>(k)] = spec.magnitude.col(k).mean();
  return normalized_entropy(mean_spectrum);
}

double acoustic_entropy(const AudioBuffer& audio, const StftParams& stft) {
  if (std::all_of(audio.samples.begin(), audio.samples.end(),
                  [](double v) { return v == 0.0; }))
    throw SilentRecordingError("all-zero signal");
  return temporal_entropy(audio) * spectral_entropy(spectrogram(audio, stft));
}

double acoustic_evenness(const Spectrogram& spec, double threshold_db,
                         double max_freq) {
  if (spec.magnitude.rows() == 0)
    throw WindowError("empty spectrogram");
  if (max_freq > spec.freqs.back() + 1e-9)
    throw ConfigError("max_freq above Nyquist");
  if (threshold_db >= 0.0)
    throw ConfigError("threshold_db must be negative (dB re full scale)");

  const auto n_bands = static_cast<std::size_t>(max_freq / 1000.0);
  const double cutoff =
      spec.full_scale * std::pow(10.0, threshold_db / 20.0);

  // Occupancy per band: fraction of cells above the cutoff.
  std::vector<long> above(n_bands, 0), cells(n_bands, 0);
  for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
    const double f = spec.freqs[k];
    if (f >= max_freq) break;
    const auto band = static_cast<std::size_t>(f / 1000.0);
    cells[band] += spec.magnitude.rows();
    for (Eigen::Index t = 0; t < spec.magnitude.rows(); ++t)
      if (spec.magnitude(t, static_cast<Eigen::Index>(k)) > cutoff)
        ++above[band];
  }

  std::vector<double> occ(n_bands, 0.0);
  for (std::size_t b = 0; b < n_bands; ++b)
    if (cells[b] > 0) occ[b] = static_cast<double>(above[b]) / cells[b];

  // Gini via mean absolute difference. Accumulated in extended precision:
  // the single-occupied-band case lands exactly on (n-1)/n and must not
  // round below it.
  long double num = 0.0L, total = 0.0L;
  for (std::size_t i = 0; i < n_bands; ++i) {
    total += occ[i];
    for (std::size_t j = i + 1; j < n_bands; ++j)
      num += std::fabs(static_cast<long double>(occ[i]) - occ[j]);
  }
  if (total <= 0.0L) return 0.0;  // no activity anywhere: perfectly even
  return static_cast<double>(num / (static_cast<long double>(n_bands) * total));
}

double acoustic_complexity(const Spectrogram& spec) {
  if (spec.magnitude.rows() < 2)
    throw InsufficientFramesError("ACI needs at least two time frames");
  double aci = 0.0;
  for (Eigen::Index k = 0; k < spec.magnitude.cols(); ++k) {
    double diff = 0.0, total = spec.magnitude(0, k);
    for (Eigen::Index t = 1; t < spec.magnitude.rows(); ++t) {
      diff += std::fabs(spec.magnitude(t, k) - spec.magnitude(t - 1, k));
      total += spec.magnitude(t, k);
    }
    if (total > 0.0) aci += diff / total;
  }
  return aci;
}

double bounded_logit(double x, double a, double b) {
  if (!(a < b)) throw ConfigError("bounded_logit needs a < b");
  if (!(x > a && x < b))
    throw BoundaryError("value " + std::to_string(x) + " outside (" +
                        std::to_string(a) + ", " + std::to_string(b) + ")");
  return std::log((x - a) / (b - x));
}

double bounded_logit_inv(double z, double a, double b) {
  // b - (b - a) / (1 + e^z), stable for large |z|.
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return (b + a * e) / (1.0 + e);
  }
  const double e = std::exp(z);
  return (a + b * e) / (1.0 + e);
}

IndexRecord compute_all(const AudioBuffer& audio, const IndexParams& params) {
  if (std::all_of(audio.samples.begin(), audio.samples.end(),
                  [](double v) { return v == 0.0; }))
    throw SilentRecordingError("all-zero signal");

  const BinnedPsd binned = bin_psd(welch_psd(audio, params.welch));
  const Spectrogram spec = spectrogram(audio, params.stft);

  IndexRecord rec;
  rec.ndsi = ndsi(binned);
  rec.psd = binned.bins;
  rec.h = temporal_entropy(audio) * spectral_entropy(spec);
  rec.aei = acoustic_evenness(spec, params.aei_threshold_db,
                              params.aei_max_freq);
  rec.aci = acoustic_complexity(spec);

  rec.t_ndsi = bounded_logit(rec.ndsi, -1.0, 1.0);
  rec.t_h = bounded_logit(rec.h, 0.0, 1.0);
  rec.t_aei = bounded_logit(rec.aei, 0.0, 1.0);
  for (std::size_t i = 0; i < rec.psd.size(); ++i)
    rec.t_psd[i] = bounded_logit(rec.psd[i], 0.0, 1.0);
  if (rec.aci <= 0.0)
    throw BoundaryError("ACI is zero; log transform undefined");
  rec.t_aci = std::log(rec.aci);
  return rec;
}

}  // namespace soundscape
