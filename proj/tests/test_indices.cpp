#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "core/audio.hpp"
#include "core/errors.hpp"
#include "core/indices.hpp"
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

BinnedPsd binned_of(std::array<double, 10> bins) {
  BinnedPsd b;
  b.bins = bins;
  b.normalization = 1.0;
  return b;
}

}  // namespace

TEST_CASE("ndsi from band proportions") {
  SUBCASE("biophony 0.9 vs anthrophony 0.1 gives 0.8") {
    const auto b = binned_of({0.1, 0.5, 0.4, 0, 0, 0, 0, 0, 0, 0});
    CHECK(ndsi(b) == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("balanced bands give zero") {
    const auto b = binned_of({0.5, 0.3, 0.2, 0, 0, 0, 0, 0, 0, 0});
    CHECK(ndsi(b) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("antisymmetric under swapping the two sides") {
    const auto a = binned_of({0.3, 0.7, 0, 0, 0, 0, 0, 0, 0, 0});
    const auto b = binned_of({0.7, 0.3, 0, 0, 0, 0, 0, 0, 0, 0});
    CHECK(ndsi(a) == doctest::Approx(-ndsi(b)).epsilon(1e-12));
  }
  SUBCASE("sign follows the dominant side") {
    const auto b = binned_of({0.49, 0.51, 0, 0, 0, 0, 0, 0, 0, 0});
    CHECK(ndsi(b) > 0.0);
  }
}

TEST_CASE("a 1.5 kHz tone recording approaches the anthrophony pole") {
  const IndexParams params;
  const AudioBuffer audio = buffer_of(ts::tone(1500.0, 0.4, 5.0, 22050));
  const BinnedPsd b = bin_psd(welch_psd(audio, params.welch));
  CHECK(ndsi(b) <= -0.95);
}

TEST_CASE("acoustic entropy") {
  const StftParams stft;
  SUBCASE("stationary white noise is near-maximal") {
    const AudioBuffer audio = buffer_of(ts::white_noise(0.5, 10.0, 22050, 3));
    CHECK(acoustic_entropy(audio, stft) >= 0.9);
  }
  SUBCASE("constant-envelope tone is low, driven by spectral entropy") {
    const AudioBuffer audio = buffer_of(ts::tone(4000.0, 0.5, 10.0, 22050));
    const double h = acoustic_entropy(audio, stft);
    CHECK(h <= 0.5);
    CHECK(temporal_entropy(audio) >= 0.9);  // envelope is flat
    CHECK(spectral_entropy(spectrogram(audio, stft)) <= 0.5);
  }
  SUBCASE("always inside [0, 1]") {
    for (uint64_t seed = 1; seed <= 5; ++seed) {
      std::vector<double> x = ts::white_noise(0.2, 2.0, 22050, seed);
      ts::add(x, ts::tone(900.0 * static_cast<double>(seed), 0.3, 2.0, 22050));
      const double h = acoustic_entropy(buffer_of(std::move(x)), stft);
      CHECK(h >= 0.0);
      CHECK(h <= 1.0);
    }
  }
  SUBCASE("all-zero signal raises SilentRecordingError") {
    const AudioBuffer audio = buffer_of(std::vector<double>(22050, 0.0));
    CHECK_THROWS_AS(acoustic_entropy(audio, stft), SilentRecordingError);
  }
}

TEST_CASE("acoustic evenness") {
  const IndexParams params;
  SUBCASE("every cell above threshold is perfect evenness") {
    const AudioBuffer audio = buffer_of(ts::white_noise(0.8, 5.0, 22050, 17));
    const Spectrogram sg = spectrogram(audio, params.stft);
    CHECK(acoustic_evenness(sg, -120.0, 10000.0) == 0.0);
  }
  SUBCASE("activity confined to one band hits the ten-band ceiling") {
    // Amplitude 0.1: the main lobe sits at -20 dBFS (over the -50 cutoff),
    // Hamming sidelobes at or below -62 dBFS (under it).
    const AudioBuffer audio = buffer_of(ts::tone(4500.0, 0.1, 5.0, 22050));
    const Spectrogram sg = spectrogram(audio, params.stft);
    const double aei =
        acoustic_evenness(sg, params.aei_threshold_db, params.aei_max_freq);
    CHECK(aei >= 0.9);
    CHECK(aei <= 0.9 + 1e-12);
  }
  SUBCASE("broadband white noise is nearly even") {
    const AudioBuffer audio = buffer_of(ts::white_noise(0.3, 5.0, 22050, 29));
    const Spectrogram sg = spectrogram(audio, params.stft);
    CHECK(acoustic_evenness(sg, params.aei_threshold_db,
                            params.aei_max_freq) <= 0.1);
  }
  SUBCASE("threshold must be negative, ceiling below Nyquist") {
    const AudioBuffer audio = buffer_of(ts::white_noise(0.3, 1.0, 22050, 1));
    const Spectrogram sg = spectrogram(audio, params.stft);
    CHECK_THROWS_AS(acoustic_evenness(sg, 3.0, 10000.0), ConfigError);
    CHECK_THROWS_AS(acoustic_evenness(sg, -50.0, 12000.0), ConfigError);
  }
}

TEST_CASE("acoustic complexity") {
  const IndexParams params;
  SUBCASE("hop-periodic constant tone has exactly zero intensity change") {
    // Frequency an integer multiple of rate/hop: every frame sees the same
    // samples, so successive-frame differences vanish identically.
    const double freq = ts::hop_locked_freq(22050, 256, 35);  // ~3014.6 Hz
    const AudioBuffer audio = buffer_of(ts::tone(freq, 0.5, 5.0, 22050));
    const Spectrogram sg = spectrogram(audio, params.stft);
    CHECK(acoustic_complexity(sg) <= 1e-9);
  }
  SUBCASE("amplitude modulation raises ACI over a constant tone") {
    const double freq = 3000.0;
    std::vector<double> constant = ts::tone(freq, 0.5, 5.0, 22050);
    std::vector<double> modulated = ts::tone(freq, 0.5, 5.0, 22050);
    for (std::size_t i = 0; i < modulated.size(); ++i) {
      const double t = static_cast<double>(i) / 22050.0;
      modulated[i] *= 1.0 + 0.8 * std::sin(2.0 * std::numbers::pi * 3.0 * t);
    }
    // Equalize mean power before comparing.
    const double scale = std::sqrt(ts::variance(constant) /
                                   ts::variance(modulated));
    for (auto& v : modulated) v *= scale;
    const double aci_const = acoustic_complexity(
        spectrogram(buffer_of(std::move(constant)), params.stft));
    const double aci_mod = acoustic_complexity(
        spectrogram(buffer_of(std::move(modulated)), params.stft));
    CHECK(aci_mod > aci_const);
  }
  SUBCASE("nonnegative for arbitrary signals") {
    for (uint64_t seed = 0; seed < 4; ++seed) {
      const AudioBuffer audio =
          buffer_of(ts::white_noise(0.4, 1.0, 22050, seed));
      CHECK(acoustic_complexity(spectrogram(audio, params.stft)) >= 0.0);
    }
  }
  SUBCASE("a single-frame spectrogram is insufficient") {
    const AudioBuffer audio = buffer_of(ts::white_noise(0.4, 512.0 / 22050.0,
                                                        22050, 2));
    const Spectrogram sg = spectrogram(audio, params.stft);
    REQUIRE(sg.magnitude.rows() == 1);
    CHECK_THROWS_AS(acoustic_complexity(sg), InsufficientFramesError);
  }
}

TEST_CASE("bounded logit") {
  CHECK(bounded_logit(0.0, -1.0, 1.0) == 0.0);
  CHECK(bounded_logit(0.5, -1.0, 1.0) ==
        doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(bounded_logit(1.0, -1.0, 1.0), BoundaryError);
  CHECK_THROWS_AS(bounded_logit(-1.0, -1.0, 1.0), BoundaryError);
  CHECK_THROWS_AS(bounded_logit(1.7, -1.0, 1.0), BoundaryError);
  CHECK_THROWS_AS(bounded_logit(0.5, 1.0, -1.0), ConfigError);

  SUBCASE("strictly increasing") {
    double prev = -1e300;
    for (double x = -0.99; x < 1.0; x += 0.07) {
      const double z = bounded_logit(x, -1.0, 1.0);
      CHECK(z > prev);
      prev = z;
    }
  }
  SUBCASE("inverse recovers the argument") {
    for (double x = -0.999999; x <= 1.0 - 1e-6; x += 0.0837) {
      const double z = bounded_logit(x, -1.0, 1.0);
      CHECK(bounded_logit_inv(z, -1.0, 1.0) ==
            doctest::Approx(x).epsilon(1e-12));
    }
    for (double x = 1e-6; x <= 1.0 - 1e-6; x += 0.0491) {
      const double z = bounded_logit(x, 0.0, 1.0);
      CHECK(bounded_logit_inv(z, 0.0, 1.0) ==
            doctest::Approx(x).epsilon(1e-12));
    }
  }
}

TEST_CASE("compute_all") {
  const IndexParams params;
  SUBCASE("two equal tones straddling the band split balance the NDSI") {
    std::vector<double> x = ts::tone(1500.0, 0.3, 5.0, 22050);
    ts::add(x, ts::tone(5000.0, 0.3, 5.0, 22050));
    const IndexRecord rec = compute_all(buffer_of(std::move(x)), params);
    CHECK(std::fabs(rec.ndsi) <= 0.05);
    CHECK(std::fabs(rec.t_ndsi) <= 0.11);  // logit near the origin
  }
  SUBCASE("white noise spreads the bins and pushes NDSI to 0.8") {
    const IndexRecord rec =
        compute_all(buffer_of(ts::white_noise(0.5, 10.0, 22050, 41)), params);
    for (double b : rec.psd) CHECK(b == doctest::Approx(0.1).epsilon(0.15));
    CHECK(rec.ndsi == doctest::Approx(0.8).epsilon(0.03));
  }
  SUBCASE("silent recording propagates SilentRecordingError") {
    const AudioBuffer audio = buffer_of(std::vector<double>(44100, 0.0));
    CHECK_THROWS_AS(compute_all(audio, params), SilentRecordingError);
  }
  SUBCASE("record satisfies its own invariants") {
    std::vector<double> x = ts::white_noise(0.2, 5.0, 22050, 99);
    ts::add(x, ts::tone(2500.0, 0.2, 5.0, 22050));
    const IndexRecord rec = compute_all(buffer_of(std::move(x)), params);
    double alpha = rec.psd[0], beta = 0.0, sum = 0.0;
    for (std::size_t i = 1; i < rec.psd.size(); ++i) beta += rec.psd[i];
    for (double b : rec.psd) sum += b;
    CHECK(rec.ndsi ==
          doctest::Approx((beta - alpha) / (beta + alpha)).epsilon(1e-12));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    for (double v : rec.transformed()) CHECK(std::isfinite(v));
    CHECK(rec.t_aci == doctest::Approx(std::log(rec.aci)).epsilon(1e-12));
  }
  SUBCASE("bit-reproducible across calls") {
    const AudioBuffer audio =
        buffer_of(ts::white_noise(0.3, 5.0, 22050, 123));
    const IndexRecord a = compute_all(audio, params);
    const IndexRecord b = compute_all(audio, params);
    CHECK(std::memcmp(&a, &b, sizeof(IndexRecord)) == 0);
  }
  SUBCASE("PSD-driven indices are invariant to amplitude scaling") {
    std::vector<double> x = ts::white_noise(0.1, 4.0, 22050, 55);
    ts::add(x, ts::tone(6000.0, 0.1, 4.0, 22050));
    std::vector<double> y = x;
    for (auto& v : y) v *= 4.0;
    const IndexRecord a = compute_all(buffer_of(std::move(x)), params);
    const IndexRecord b = compute_all(buffer_of(std::move(y)), params);
    for (std::size_t i = 0; i < 10; ++i)
      CHECK(a.psd[i] == doctest::Approx(b.psd[i]).epsilon(1e-9));
    CHECK(a.ndsi == doctest::Approx(b.ndsi).epsilon(1e-9));
    CHECK(a.h == doctest::Approx(b.h).epsilon(1e-6));
    CHECK(a.aci == doctest::Approx(b.aci).epsilon(1e-6));
    // AEI deliberately uses an absolute (full-scale) reference, so it is
    // not scale-invariant; loudness changes are part of what it measures.
  }
}
