#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "core/audio.hpp"
#include "core/errors.hpp"
#include "core/fft.hpp"
#include "core/spectral.hpp"
#include "support/test_support.hpp"

using namespace soundscape;
namespace ts = test_support;

namespace {

AudioBuffer buffer_of(std::vector<double> x, int rate = 22050) {
  AudioBuffer b;
  b.samples = std::move(x);
  b.sample_rate = rate;
  return b;
}

double band_power(const PsdEstimate& psd, double lo, double hi) {
  double total = 0.0;
  for (std::size_t k = 0; k < psd.freqs.size(); ++k)
    if (psd.freqs[k] >= lo && psd.freqs[k] < hi) total += psd.power[k];
  return total;
}

}  // namespace

TEST_CASE("single-segment periodogram matches the direct DFT") {
  // One segment, rectangular window: the periodogram must equal
  // |DFT|^2 / (fs * n) (interior bins doubled), checked bin by bin
  // against the O(n^2) oracle.
  const int rate = 22050;
  const std::size_t n = 256;
  std::vector<double> x = ts::tone(3000.0, 0.5, 1.0, rate);
  x.resize(n);

  WelchParams params;
  params.segment_length = n;
  params.window = Window::rectangular;
  const PsdEstimate psd = welch_psd(buffer_of(x), params);

  for (std::size_t k = 0; k <= n / 2; ++k) {
    const std::complex<double> oracle = ts::dft_bin(x, k);
    double expect = std::norm(oracle) / (static_cast<double>(rate) * n);
    if (k != 0 && k != n / 2) expect *= 2.0;
    CHECK(psd.power[k] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("hamming-window periodogram matches the windowed DFT oracle") {
  const int rate = 22050;
  const std::size_t n = 200;
  std::vector<double> x = ts::white_noise(0.8, 1.0, rate, 11);
  x.resize(n);

  WelchParams params;
  params.segment_length = n;
  const PsdEstimate psd = welch_psd(buffer_of(x), params);

  const std::vector<double> w = make_window(Window::hamming, n);
  double wss = 0.0;
  for (double v : w) wss += v * v;
  std::vector<double> xw(n);
  for (std::size_t i = 0; i < n; ++i) xw[i] = x[i] * w[i];
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double expect = 2.0 * std::norm(ts::dft_bin(xw, k)) / (rate * wss);
    CHECK(psd.power[k] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("pure 3 kHz tone concentrates its band power") {
  const AudioBuffer audio = buffer_of(ts::tone(3000.0, 0.5, 10.0, 22050));
  const PsdEstimate psd = welch_psd(audio, {});
  const double total = band_power(psd, 1000.0, 11000.0);
  const double at_tone = band_power(psd, 3000.0 - 50.0, 3000.0 + 50.0);
  CHECK(at_tone / total >= 0.99);
}

TEST_CASE("all-zero signal raises SilentRecordingError") {
  const AudioBuffer audio = buffer_of(std::vector<double>(44100, 0.0));
  CHECK_THROWS_AS(welch_psd(audio, {}), SilentRecordingError);
}

TEST_CASE("welch segment length must fit the signal") {
  AudioBuffer audio = buffer_of(ts::tone(1000.0, 0.5, 0.5, 22050));
  WelchParams params;
  params.segment_length = audio.samples.size() + 1;
  CHECK_THROWS_AS(welch_psd(audio, params), WindowError);
}

TEST_CASE("white-noise PSD is flat across the ten 1-kHz bands") {
  // Averaging ~100 windowed periodograms: chi-squared averaging keeps the
  // per-band spread tight. Monte Carlo over seeds during development put
  // the max/min ratio near 1.02; 1.5 is the frozen bound.
  const AudioBuffer audio =
      buffer_of(ts::white_noise(0.5, 50.6, 22050, 123));  // ~100 segments
  const PsdEstimate psd = welch_psd(audio, {});
  const BinnedPsd binned = bin_psd(psd);
  double lo = 1.0, hi = 0.0;
  for (double b : binned.bins) {
    lo = std::min(lo, b);
    hi = std::max(hi, b);
  }
  CHECK(hi / lo <= 1.5);
}

TEST_CASE("welch power scales with the square of the amplitude") {
  std::vector<double> x = ts::white_noise(0.2, 2.0, 22050, 5);
  std::vector<double> x3 = x;
  for (auto& v : x3) v *= 3.0;
  const PsdEstimate a = welch_psd(buffer_of(x), {});
  const PsdEstimate b = welch_psd(buffer_of(x3), {});
  for (std::size_t k = 0; k < a.power.size(); k += 97) {
    if (a.power[k] == 0.0) continue;
    CHECK(b.power[k] / a.power[k] == doctest::Approx(9.0).epsilon(1e-9));
  }
}

TEST_CASE("total welch power recovers the signal variance") {
  // White noise: integral of the one-sided PSD equals the variance; the
  // window normalization makes the constant exactly one.
  const std::vector<double> x = ts::white_noise(0.9, 30.0, 22050, 77);
  const PsdEstimate psd = welch_psd(buffer_of(x), {});
  const double df = psd.freqs[1] - psd.freqs[0];
  double total = 0.0;
  for (double p : psd.power) total += p * df;
  CHECK(total / ts::variance(x) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("welch output is bit-stable across calls") {
  const AudioBuffer audio = buffer_of(ts::white_noise(0.5, 3.0, 22050, 9));
  const PsdEstimate a = welch_psd(audio, {});
  const PsdEstimate b = welch_psd(audio, {});
  REQUIRE(a.power.size() == b.power.size());
  for (std::size_t k = 0; k < a.power.size(); ++k) CHECK(a.power[k] == b.power[k]);
}

TEST_CASE("bin_psd normalizes ten 1-kHz bands") {
  SUBCASE("pure 1.5 kHz tone lands in the first band") {
    const PsdEstimate psd =
        welch_psd(buffer_of(ts::tone(1500.0, 0.5, 5.0, 22050)), {});
    const BinnedPsd b = bin_psd(psd);
    CHECK(b.bins[0] >= 0.999);
    double sum = 0.0;
    for (double v : b.bins) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("pure 10.5 kHz tone lands in the last band") {
    const PsdEstimate psd =
        welch_psd(buffer_of(ts::tone(10500.0, 0.5, 5.0, 22050)), {});
    const BinnedPsd b = bin_psd(psd);
    CHECK(b.bins[9] >= 0.999);
  }
  SUBCASE("equal power in every band gives 0.1 each") {
    PsdEstimate psd;
    psd.sample_rate = 22050;
    for (int k = 0; k <= 11025; ++k) {
      psd.freqs.push_back(static_cast<double>(k));
      psd.power.push_back(1.0);
    }
    const BinnedPsd b = bin_psd(psd);
    for (double v : b.bins) CHECK(v == doctest::Approx(0.1).epsilon(1e-3));
  }
  SUBCASE("zero power over 1-11 kHz is a silent recording") {
    PsdEstimate psd;
    psd.sample_rate = 22050;
    for (int k = 0; k <= 11025; ++k) {
      psd.freqs.push_back(static_cast<double>(k));
      psd.power.push_back(k < 1000 ? 1.0 : 0.0);  // all power below 1 kHz
    }
    CHECK_THROWS_AS(bin_psd(psd), SilentRecordingError);
  }
  SUBCASE("grid must reach 11 kHz") {
    PsdEstimate psd;
    psd.sample_rate = 16000;
    for (int k = 0; k <= 8000; ++k) {
      psd.freqs.push_back(static_cast<double>(k));
      psd.power.push_back(1.0);
    }
    CHECK_THROWS_AS(bin_psd(psd), ConfigError);
  }
}

TEST_CASE("bin_psd is invariant to positive amplitude scaling") {
  std::vector<double> x = ts::white_noise(0.1, 4.0, 22050, 21);
  std::vector<double> y = x;
  for (auto& v : y) v *= 7.5;
  const BinnedPsd a = bin_psd(welch_psd(buffer_of(x), {}));
  const BinnedPsd b = bin_psd(welch_psd(buffer_of(y), {}));
  for (std::size_t i = 0; i < a.bins.size(); ++i)
    CHECK(a.bins[i] == doctest::Approx(b.bins[i]).epsilon(1e-9));
}

TEST_CASE("spectrogram frame count and zero-signal behavior") {
  AudioBuffer audio = buffer_of(std::vector<double>(22050, 0.0));
  const Spectrogram sg = spectrogram(audio, {});
  // floor((n - window) / hop) + 1 frames
  CHECK(sg.magnitude.rows() == (22050 - 512) / 256 + 1);
  CHECK(sg.magnitude.cols() == 257);
  CHECK(sg.magnitude.maxCoeff() == 0.0);
  CHECK(sg.magnitude.minCoeff() == 0.0);
}

TEST_CASE("spectrogram of a pure tone peaks at the tone bin in every frame") {
  const double freq = 4000.0;
  const AudioBuffer audio = buffer_of(ts::tone(freq, 0.5, 1.0, 22050));
  const Spectrogram sg = spectrogram(audio, {});
  for (Eigen::Index t = 0; t < sg.magnitude.rows(); ++t) {
    Eigen::Index argmax = 0;
    sg.magnitude.row(t).maxCoeff(&argmax);
    CHECK(std::fabs(sg.freqs[static_cast<std::size_t>(argmax)] - freq) <=
          22050.0 / 512.0);
  }
  // Frame 0 against the windowed DFT oracle.
  const std::vector<double> w = make_window(Window::hamming, 512);
  std::vector<double> frame(512);
  for (std::size_t i = 0; i < 512; ++i) frame[i] = audio.samples[i] * w[i];
  for (std::size_t k = 0; k < 257; k += 13)
    CHECK(sg.magnitude(0, static_cast<Eigen::Index>(k)) ==
          doctest::Approx(std::abs(ts::dft_bin(frame, k))).epsilon(1e-9));
}

TEST_CASE("impulse energy stays in frames covering the impulse") {
  std::vector<double> x(22050, 0.0);
  const std::size_t at = 10000;
  x[at] = 1.0;
  const Spectrogram sg = spectrogram(buffer_of(std::move(x)), {});
  for (Eigen::Index t = 0; t < sg.magnitude.rows(); ++t) {
    const std::size_t start = static_cast<std::size_t>(t) * 256;
    const bool covers = start <= at && at < start + 512;
    const double energy = sg.magnitude.row(t).sum();
    if (covers)
      CHECK(energy > 0.0);
    else
      CHECK(energy == 0.0);
  }
}

TEST_CASE("window longer than the signal is a WindowError") {
  AudioBuffer audio = buffer_of(std::vector<double>(300, 0.1));
  CHECK_THROWS_AS(spectrogram(audio, {}), WindowError);
}
