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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "launderbench/audio.hpp"
#include "launderbench/error.hpp"
#include "launderbench/rng.hpp"
#include "test_util.hpp"

namespace lb::audio {
namespace {

using Bytes = std::vector<std::uint8_t>;

void put_u16(Bytes& b, std::uint16_t v) {
  b.push_back(v & 0xff);
  b.push_back(v >> 8);
}
void put_u32(Bytes& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back((v >> (8 * i)) & 0xff);
}
void put_tag(Bytes& b, const char* tag) { b.insert(b.end(), tag, tag + 4); }

// Minimal RIFF/WAVE writer for formats the library does not emit.
Bytes make_wav(std::uint16_t format_tag, std::uint16_t channels, std::uint16_t bits, int rate,
               const Bytes& data, bool extensible = false, bool extra_chunk = false) {
  Bytes fmt;
  put_u16(fmt, extensible ? 0xFFFE : format_tag);
  put_u16(fmt, channels);
  put_u32(fmt, static_cast<std::uint32_t>(rate));
  put_u32(fmt, static_cast<std::uint32_t>(rate * channels * bits / 8));
  put_u16(fmt, static_cast<std::uint16_t>(channels * bits / 8));
  put_u16(fmt, bits);
  if (extensible) {
    put_u16(fmt, 22);
    put_u16(fmt, bits);
    put_u32(fmt, 4);  // channel mask
    put_u16(fmt, format_tag);
    static const std::uint8_t guid_tail[14] = {0x00, 0x00, 0x00, 0x00, 0x10, 0x00, 0x80,
                                               0x00, 0x00, 0xAA, 0x00, 0x38, 0x9B, 0x71};
    fmt.insert(fmt.end(), guid_tail, guid_tail + 14);
  }
  Bytes body;
  put_tag(body, "WAVE");
  put_tag(body, "fmt ");
  put_u32(body, static_cast<std::uint32_t>(fmt.size()));
  body.insert(body.end(), fmt.begin(), fmt.end());
  if (extra_chunk) {
    put_tag(body, "LIST");
    put_u32(body, 3);
    body.insert(body.end(), {'a', 'b', 'c', 0});  // odd size plus pad byte
  }
  put_tag(body, "data");
  put_u32(body, static_cast<std::uint32_t>(data.size()));
  body.insert(body.end(), data.begin(), data.end());
  Bytes out;
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(body.size()));
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

TEST(AudioBuffer, RejectsNonPositiveRate) {
  EXPECT_THROW(AudioBuffer({0.0}, 0), InvalidParameter);
  EXPECT_THROW(AudioBuffer({0.0}, -8000), InvalidParameter);
}

TEST(AudioBuffer, Accessors) {
  AudioBuffer b({0.5, -0.5, 0.25, 0.0}, 8000);
  EXPECT_EQ(b.size(), 4u);
  EXPECT_DOUBLE_EQ(b.duration_seconds(), 0.0005);
  EXPECT_EQ(b[2], 0.25);
  EXPECT_FALSE(b.empty());
  const std::vector<double> moved = std::move(b).release_samples();
  EXPECT_EQ(moved.size(), 4u);
}

TEST(RmsPower, MeanSquare) {
  EXPECT_DOUBLE_EQ(rms_power(AudioBuffer({1.0, -1.0, 0.0, 0.0}, 16000)), 0.5);
  EXPECT_THROW(rms_power(AudioBuffer({}, 16000)), EmptyBuffer);
}

TEST(QuantizePcm16, RoundsSaturatesAndCountsClips) {
  const std::vector<double> x = {0.0,  0.5,  -0.5, 1.0, -1.0, 1.5,
                                 -2.0, 1e-6, std::numeric_limits<double>::quiet_NaN()};
  std::size_t clipped = 0;
  const std::vector<std::int16_t> q = quantize_pcm16(x, &clipped);
  EXPECT_EQ(q[0], 0);
  EXPECT_EQ(q[1], 16384);
  EXPECT_EQ(q[2], -16384);
  EXPECT_EQ(q[3], 32767);   // +1.0 saturates without counting as a clip
  EXPECT_EQ(q[4], -32768);
  EXPECT_EQ(q[5], 32767);
  EXPECT_EQ(q[6], -32768);
  EXPECT_EQ(q[7], 0);
  EXPECT_EQ(q[8], 0);
  EXPECT_EQ(clipped, 3u);
}

TEST(Wav16, RoundTripErrorWithinOneLsb) {
  testing::TempDir dir;
  Rng rng(3);
  std::vector<double> x(5000);
  for (double& v : x) v = 2.0 * rng.uniform() - 1.0;
  const AudioBuffer in(x, 22050);
  EXPECT_EQ(write_audio(in, dir / "a.wav", FileFormat::kWav16), 0u);
  const AudioBuffer out = read_audio(dir / "a.wav");
  ASSERT_EQ(out.size(), in.size());
  EXPECT_EQ(out.sample_rate_hz(), 22050);
  for (std::size_t i = 0; i < x.size(); ++i) {
    EXPECT_LE(std::abs(out[i] - x[i]), std::ldexp(1.0, -15)) << i;
  }
}

TEST(Wav16, HeaderLayout) {
  const std::vector<std::int16_t> pcm = {1, -1, 32767};
  const Bytes b = encode_wav16(pcm, 16000);
  ASSERT_EQ(b.size(), 44u + 6u);
  EXPECT_EQ(std::memcmp(b.data(), "RIFF", 4), 0);
  EXPECT_EQ(std::memcmp(b.data() + 8, "WAVE", 4), 0);
  EXPECT_EQ(b[22], 1);  // channels
  EXPECT_EQ(b[34], 16);  // bits
  const AudioBuffer d = decode_audio(b);
  EXPECT_EQ(d[0], 1.0 / 32768);
  EXPECT_EQ(d[1], -1.0 / 32768);
}

TEST(WavDecode, Pcm24AndPcm32) {
  Bytes d24 = {0x00, 0x00, 0x40, 0x00, 0x00, 0xC0};  // +0.5, -0.5
  const AudioBuffer a = decode_audio(make_wav(1, 1, 24, 48000, d24));
  EXPECT_EQ(a.sample_rate_hz(), 48000);
  EXPECT_EQ(a[0], 0.5);
  EXPECT_EQ(a[1], -0.5);
  Bytes d32;
  put_u32(d32, 0x20000000u);  // +0.25
  const AudioBuffer b = decode_audio(make_wav(1, 1, 32, 8000, d32));
  EXPECT_EQ(b[0], 0.25);
}

TEST(WavDecode, FloatFormatsAndExtensible) {
  Bytes f32(4), f64(8);
  const float fv = -0.125f;
  const double dv = 0.375;
  std::memcpy(f32.data(), &fv, 4);
  std::memcpy(f64.data(), &dv, 8);
  EXPECT_EQ(decode_audio(make_wav(3, 1, 32, 16000, f32))[0], -0.125);
  EXPECT_EQ(decode_audio(make_wav(3, 1, 64, 16000, f64))[0], 0.375);
  EXPECT_EQ(decode_audio(make_wav(3, 1, 64, 16000, f64, /*extensible=*/true))[0], 0.375);
}

TEST(WavDecode, SkipsUnknownChunksWithPadding) {
  Bytes d = {0x00, 0x40};
  EXPECT_EQ(decode_audio(make_wav(1, 1, 16, 16000, d, false, /*extra_chunk=*/true))[0], 0.5);
}

TEST(WavDecode, StereoRejected) {
  Bytes d(8, 0);
  EXPECT_THROW(decode_audio(make_wav(1, 2, 16, 16000, d)), MultichannelInput);
}

TEST(WavDecode, UnsupportedEncodingRejected) {
  Bytes d(4, 0);
  EXPECT_THROW(decode_audio(make_wav(6, 1, 8, 8000, d)), UnsupportedFormat);  // A-law
  EXPECT_THROW(decode_audio(make_wav(1, 1, 8, 8000, d)), UnsupportedFormat);
}

TEST(WavDecode, TruncatedAndGarbageInput) {
  Bytes d = {0x00, 0x40, 0x00, 0x40};
  Bytes w = make_wav(1, 1, 16, 16000, d);
  w.resize(30);
  EXPECT_THROW(decode_audio(w), CorruptFile);
  const Bytes junk = {'h', 'e', 'l', 'l', 'o', ' ', 'w', 'o', 'r', 'l', 'd', '!'};
  EXPECT_THROW(decode_audio(junk), UnsupportedFormat);
  EXPECT_THROW(decode_audio(Bytes{}), UnsupportedFormat);
}

TEST(ReadAudio, MissingFileIsIoFailure) {
  testing::TempDir dir;
  try {
    read_audio(dir / "nope.wav");
    FAIL() << "expected IoFailure";
  } catch (const IoFailure& e) {
    EXPECT_NE(std::string(e.what()).find("nope.wav"), std::string::npos);
  }
}

TEST(ReadAudio, ErrorsNameThePath) {
  testing::TempDir dir;
  testing::write_text(dir / "bad.wav", "not audio at all");
  try {
    read_audio(dir / "bad.wav");
    FAIL() << "expected UnsupportedFormat";
  } catch (const UnsupportedFormat& e) {
    EXPECT_NE(std::string(e.what()).find("bad.wav"), std::string::npos);
  }
}

TEST(WriteAudio, ReportsClippedSamples) {
  testing::TempDir dir;
  const AudioBuffer b({0.1, 1.2, -3.0, 0.0}, 16000);
  EXPECT_EQ(write_audio(b, dir / "c.wav", FileFormat::kWav16), 2u);
  EXPECT_EQ(write_audio(b, dir / "c.flac", FileFormat::kFlac), 2u);
}

TEST(WriteAudio, UnwritablePathIsIoFailure) {
  testing::TempDir dir;
  testing::write_text(dir / "file", "x");
  EXPECT_THROW(write_audio(AudioBuffer({0.0}, 16000), dir / "file" / "sub.wav", FileFormat::kWav16),
               IoFailure);
}

}  // namespace
}  // namespace lb::audio
