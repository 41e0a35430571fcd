#include "core/audio.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "core/errors.hpp"

namespace soundscape {

namespace {

uint32_t read_u32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
         static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
}

uint16_t read_u16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | p[1] << 8);
}

}  // namespace

AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path);

  if (raw.size() < 12 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
      std::memcmp(raw.data() + 8, "WAVE", 4) != 0) {
    throw DecodeError(path + ": not a RIFF/WAVE file");
  }

  bool have_fmt = false;
  uint16_t format = 0, channels = 0, bits = 0;
  uint32_t sample_rate = 0;
  const unsigned char* data = nullptr;
  uint32_t data_size = 0;

  size_t pos = 12;
  while (pos + 8 <= raw.size()) {
    const unsigned char* chunk = raw.data() + pos;
    uint32_t size = read_u32(chunk + 4);
    if (pos + 8 + size > raw.size())
      throw DecodeError(path + ": truncated chunk");
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw DecodeError(path + ": short fmt chunk");
      format = read_u16(chunk + 8);
      channels = read_u16(chunk + 10);
      sample_rate = read_u32(chunk + 12);
      bits = read_u16(chunk + 22);
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = chunk + 8;
      data_size = size;
    }
    pos += 8 + size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw DecodeError(path + ": missing fmt chunk");
  if (data == nullptr) throw DecodeError(path + ": missing data chunk");
  if (data_size == 0) throw DecodeError(path + ": empty data chunk");
  if (channels != 1)
    throw ChannelError(path + ": " + std::to_string(channels) +
                       " channels (mono required)");
  if (format != 1 || bits != 16)
    throw FormatError(path + ": only 16-bit integer PCM is supported");
  if (sample_rate < static_cast<uint32_t>(kMinSampleRate))
    throw FormatError(path + ": sample rate " + std::to_string(sample_rate) +
                      " below " + std::to_string(kMinSampleRate) + " Hz");
  if (data_size % 2 != 0) throw DecodeError(path + ": odd data chunk size");

  AudioBuffer buf;
  buf.sample_rate = static_cast<int>(sample_rate);
  size_t n = data_size / 2;
  buf.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    int16_t s = static_cast<int16_t>(read_u16(data + 2 * i));
    buf.samples[i] = static_cast<double>(s) / 32768.0;
  }
  return buf;
}

AudioBuffer make_buffer(std::span<const double> samples, int sample_rate) {
  if (samples.empty()) throw DecodeError("empty sample buffer");
  if (sample_rate < kMinSampleRate)
    throw FormatError("sample rate " + std::to_string(sample_rate) +
                      " below " + std::to_string(kMinSampleRate) + " Hz");
  for (double s : samples)
    if (!std::isfinite(s)) throw DecodeError("non-finite sample value");
  AudioBuffer buf;
  buf.samples.assign(samples.begin(), samples.end());
  buf.sample_rate = sample_rate;
  return buf;
}

void write_wav(const std::string& path, std::span<const double> samples,
               int sample_rate) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot create " + path);

  auto put_u32 = [&](uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v),
                          static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<char*>(b), 4);
  };
  auto put_u16 = [&](uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v),
                          static_cast<unsigned char>(v >> 8)};
    out.write(reinterpret_cast<char*>(b), 2);
  };

  uint32_t data_size = static_cast<uint32_t>(samples.size() * 2);
  out.write("RIFF", 4);
  put_u32(36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_u32(16);
  put_u16(1);  // PCM
  put_u16(1);  // mono
  put_u32(static_cast<uint32_t>(sample_rate));
  put_u32(static_cast<uint32_t>(sample_rate) * 2);  // byte rate
  put_u16(2);                                       // block align
  put_u16(16);                                      // bits per sample
  out.write("data", 4);
  put_u32(data_size);
  for (double s : samples) {
    double clamped = std::fmin(1.0, std::fmax(-1.0, s));
    int v = static_cast<int>(std::lrint(clamped * 32768.0));
    if (v > 32767) v = 32767;
    if (v < -32768) v = -32768;
    put_u16(static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
  if (!out) throw IoError("write failure on " + path);
}

}  // namespace soundscape
