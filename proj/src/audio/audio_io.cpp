// Copyright 2026  launderbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "bitstream.hpp"
#include "launderbench/audio.hpp"
#include "launderbench/error.hpp"

namespace lb::audio {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t le32(const std::uint8_t* p) {
  return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) |
         (std::uint32_t{p[2]} << 16) | (std::uint32_t{p[3]} << 24);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw UnsupportedFormat("RIFF container is not WAVE");
  }
  std::size_t pos = 12;
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0, block_align = 0;
  std::uint32_t rate = 0;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) throw CorruptFile("WAV: bad fmt chunk");
      const std::uint8_t* f = bytes.data() + body;
      format = le16(f);
      channels = le16(f + 2);
      rate = le32(f + 4);
      block_align = le16(f + 12);
      bits = le16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw CorruptFile("WAV: short extensible fmt chunk");
        format = le16(f + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw CorruptFile("WAV: data chunk before fmt chunk");
      if (channels != 1) {
        throw MultichannelInput("WAV has " + std::to_string(channels) +
                                " channels; only mono is supported");
      }
      if (rate == 0) throw CorruptFile("WAV: zero sample rate");
      if (rate > static_cast<std::uint32_t>(std::numeric_limits<int>::max())) {
        throw CorruptFile("WAV: sample rate out of range");
      }
      const std::size_t available = bytes.size() - body;
      // Streaming writers leave 0 or 0xFFFFFFFF as the size.
      if (size == 0 || size == 0xFFFFFFFFu) {
        size = static_cast<std::uint32_t>(available);
      } else if (size > available) {
        throw CorruptFile("WAV: data chunk truncated");
      }
      const unsigned width = bits / 8;
      const bool is_int = format == kFormatPcm &&
                          (bits == 16 || bits == 24 || bits == 32);
      const bool is_float = format == kFormatFloat && (bits == 32 || bits == 64);
      if (!is_int && !is_float) {
        throw UnsupportedFormat("WAV: unsupported sample format " +
                                std::to_string(format) + "/" + std::to_string(bits) +
                                " bits");
      }
      if (block_align != width) throw CorruptFile("WAV: inconsistent block align");
      const std::size_t n = size / width;
      std::vector<double> samples(n);
      const std::uint8_t* d = bytes.data() + body;
      for (std::size_t i = 0; i < n; ++i, d += width) {
        if (is_int) {
          std::uint32_t u = 0;
          for (unsigned b = 0; b < width; ++b) u |= std::uint32_t{d[b]} << (8 * b);
          // Sign-extend from `bits` to 32.
          const int shift = 32 - bits;
          const std::int32_t v = static_cast<std::int32_t>(u << shift) >> shift;
          samples[i] = std::ldexp(static_cast<double>(v), -(bits - 1));
        } else if (bits == 32) {
          float f;
          std::memcpy(&f, d, 4);
          samples[i] = f;
        } else {
          double f;
          std::memcpy(&f, d, 8);
          samples[i] = f;
        }
      }
      return AudioBuffer(std::move(samples), static_cast<int>(rate));
    }
    pos = body + size + (size & 1);
  }
  throw CorruptFile(have_fmt ? "WAV: missing data chunk" : "WAV: missing fmt chunk");
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoFailure("error reading " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoFailure("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoFailure("error writing " + path.string());
}

}  // namespace

AudioBuffer::AudioBuffer(std::vector<double> samples, int sample_rate_hz)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
  if (sample_rate_hz <= 0) {
    throw InvalidParameter("sample rate must be positive, got " +
                           std::to_string(sample_rate_hz));
  }
}

double rms_power(std::span<const double> samples) {
  if (samples.empty()) throw EmptyBuffer("mean-square power of an empty buffer");
  double acc = 0.0;
  for (double s : samples) acc += s * s;
  return acc / static_cast<double>(samples.size());
}

double rms_power(const AudioBuffer& buf) { return rms_power(buf.samples()); }

AudioBuffer decode_audio(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "RIFF", 4) == 0) {
    return decode_wav(bytes);
  }
  const bool flac = (bytes.size() >= 4 && std::memcmp(bytes.data(), "fLaC", 4) == 0) ||
                    (bytes.size() >= 3 && std::memcmp(bytes.data(), "ID3", 3) == 0);
  if (!flac) throw UnsupportedFormat("unrecognized audio container");
  detail::FlacStream s = detail::decode_flac(bytes);
  std::vector<double> samples(s.samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = std::ldexp(static_cast<double>(s.samples[i]), -(s.bits_per_sample - 1));
  }
  return AudioBuffer(std::move(samples), s.sample_rate_hz);
}

AudioBuffer read_audio(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  try {
    return decode_audio(bytes);
  } catch (const Error& e) {
    // Re-throw with the file name attached, preserving the error kind.
    const std::string msg = path.string() + ": " + e.what();
    if (dynamic_cast<const MultichannelInput*>(&e)) throw MultichannelInput(msg);
    if (dynamic_cast<const UnsupportedFormat*>(&e)) throw UnsupportedFormat(msg);
    if (dynamic_cast<const CorruptFile*>(&e)) throw CorruptFile(msg);
    throw;
  }
}

std::vector<std::int16_t> quantize_pcm16(std::span<const double> samples,
                                         std::size_t* clipped) {
  std::vector<std::int16_t> pcm(samples.size());
  std::size_t clips = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double s = samples[i];
    if (s > 1.0 || s < -1.0 || std::isnan(s)) ++clips;
    double v = std::nearbyint(s * 32768.0);
    if (std::isnan(v)) v = 0.0;
    v = std::clamp(v, -32768.0, 32767.0);
    pcm[i] = static_cast<std::int16_t>(v);
  }
  if (clipped) *clipped = clips;
  return pcm;
}

std::vector<std::uint8_t> encode_wav16(std::span<const std::int16_t> pcm,
                                       int sample_rate_hz) {
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(pcm.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  put32(out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  put32(out, 16);
  put16(out, kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(sample_rate_hz));
  put32(out, static_cast<std::uint32_t>(sample_rate_hz) * 2);
  put16(out, 2);
  put16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  put32(out, data_bytes);
  for (std::int16_t v : pcm) put16(out, static_cast<std::uint16_t>(v));
  return out;
}

std::size_t write_audio(const AudioBuffer& buf, const std::filesystem::path& path,
                        FileFormat format) {
  if (format == FileFormat::kFlac && buf.sample_rate_hz() >= (1 << 20)) {
    throw InvalidParameter("FLAC cannot store sample rate " +
                           std::to_string(buf.sample_rate_hz()));
  }
  std::size_t clipped = 0;
  const std::vector<std::int16_t> pcm = quantize_pcm16(buf.samples(), &clipped);
  write_file(path, format == FileFormat::kWav16
                       ? encode_wav16(pcm, buf.sample_rate_hz())
                       : encode_flac16(pcm, buf.sample_rate_hz()));
  return clipped;
}

}  // namespace lb::audio
