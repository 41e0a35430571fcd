#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "core/audio.hpp"
#include "core/errors.hpp"
#include "support/test_support.hpp"

using namespace soundscape;
using test_support::TempDir;
using test_support::WavSpec;
using test_support::write_raw_wav;

TEST_CASE("reads a hand-assembled PCM16 mono file") {
  TempDir dir;
  WavSpec spec;
  spec.samples = {0, 16384, -16384, -32768, 32767};
  const std::string path = dir.file("tiny.wav");
  write_raw_wav(path, spec);

  const AudioBuffer buf = read_wav(path);
  REQUIRE(buf.samples.size() == 5);
  CHECK(buf.sample_rate == 22050);
  CHECK(buf.samples[0] == 0.0);
  CHECK(buf.samples[1] == 0.5);
  CHECK(buf.samples[2] == -0.5);
  CHECK(buf.samples[3] == -1.0);  // -32768 / 32768 exactly
  CHECK(buf.samples[4] == doctest::Approx(32767.0 / 32768.0));
}

TEST_CASE("sixty seconds at 22050 Hz decodes to 1,323,000 samples") {
  TempDir dir;
  WavSpec spec;
  spec.samples.assign(22050 * 60, 1000);
  const std::string path = dir.file("minute.wav");
  write_raw_wav(path, spec);
  const AudioBuffer buf = read_wav(path);
  CHECK(buf.samples.size() == 1323000);
  CHECK(buf.duration() == doctest::Approx(60.0));
}

TEST_CASE("zero-length data chunk is a decode error") {
  TempDir dir;
  WavSpec spec;  // no samples
  const std::string path = dir.file("empty.wav");
  write_raw_wav(path, spec);
  CHECK_THROWS_AS(read_wav(path), DecodeError);
}

TEST_CASE("stereo input is rejected, not downmixed") {
  TempDir dir;
  WavSpec spec;
  spec.channels = 2;
  spec.samples = {1, 2, 3, 4};
  const std::string path = dir.file("stereo.wav");
  write_raw_wav(path, spec);
  CHECK_THROWS_AS(read_wav(path), ChannelError);
}

TEST_CASE("non-PCM16 encodings are format errors") {
  TempDir dir;
  WavSpec spec;
  spec.samples = {1, 2};
  SUBCASE("8-bit") { spec.bits = 8; }
  SUBCASE("float format tag") { spec.format = 3; }
  const std::string path = dir.file("bad.wav");
  write_raw_wav(path, spec);
  CHECK_THROWS_AS(read_wav(path), FormatError);
}

TEST_CASE("sample rates below 22050 Hz cannot cover 11 kHz") {
  TempDir dir;
  WavSpec spec;
  spec.sample_rate = 16000;
  spec.samples = {1, 2};
  const std::string path = dir.file("slow.wav");
  write_raw_wav(path, spec);
  CHECK_THROWS_AS(read_wav(path), FormatError);
}

TEST_CASE("missing and truncated files") {
  TempDir dir;
  CHECK_THROWS_AS(read_wav(dir.file("nope.wav")), IoError);

  const std::string path = dir.file("garbage.wav");
  std::ofstream(path) << "not a riff container";
  CHECK_THROWS_AS(read_wav(path), DecodeError);
}

TEST_CASE("write/read round trip preserves quantized samples") {
  TempDir dir;
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(4096);
  for (auto& v : x) v = u(gen);

  const std::string path = dir.file("rt.wav");
  write_wav(path, x, 44100);
  const AudioBuffer buf = read_wav(path);
  REQUIRE(buf.samples.size() == x.size());
  CHECK(buf.sample_rate == 44100);
  for (std::size_t i = 0; i < x.size(); ++i) {
    // Nearest-value quantization to 16 bits, clamped at +32767.
    CHECK(std::fabs(buf.samples[i] - x[i]) <= 1.0 / 32768.0);
  }
}

TEST_CASE("make_buffer validates input") {
  CHECK_THROWS_AS(make_buffer({}, 22050), DecodeError);
  std::vector<double> bad = {0.0, std::nan("")};
  CHECK_THROWS_AS(make_buffer(bad, 22050), DecodeError);
  std::vector<double> ok = {0.0, 0.5};
  CHECK_THROWS_AS(make_buffer(ok, 8000), FormatError);
  const AudioBuffer buf = make_buffer(ok, 22050);
  CHECK(buf.samples.size() == 2);
}
