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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace lb::audio {

// Mono sample sequence at a fixed rate. Samples are nominally in [-1, 1] but
// the float pipeline is unclamped; saturation happens only when writing.
class AudioBuffer {
 public:
  // Throws InvalidParameter if sample_rate_hz <= 0.
  AudioBuffer(std::vector<double> samples, int sample_rate_hz);

  std::span<const double> samples() const { return samples_; }
  std::vector<double>& mutable_samples() { return samples_; }
  std::vector<double> release_samples() && { return std::move(samples_); }

  int sample_rate_hz() const { return sample_rate_hz_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }
  double operator[](std::size_t i) const { return samples_[i]; }

  bool operator==(const AudioBuffer&) const = default;

 private:
  std::vector<double> samples_;
  int sample_rate_hz_;
};

// Mean-square power (1/N) * sum(s_i^2). Note: not the root. Throws
// EmptyBuffer on an empty buffer.
double rms_power(const AudioBuffer& buf);
double rms_power(std::span<const double> samples);

enum class FileFormat { kWav16, kFlac };

// Reads a mono WAV (PCM 16/24/32-bit or IEEE float 32/64) or FLAC file.
// Integer PCM of width b maps v -> v / 2^(b-1).
// Throws UnsupportedFormat, MultichannelInput, CorruptFile or IoFailure.
AudioBuffer read_audio(const std::filesystem::path& path);
AudioBuffer decode_audio(std::span<const std::uint8_t> bytes);

// 16-bit quantization shared by both writers: v = round(s * 32768),
// saturated to [-32768, 32767]. `clipped` counts samples with |s| > 1.
std::vector<std::int16_t> quantize_pcm16(std::span<const double> samples,
                                         std::size_t* clipped = nullptr);

std::vector<std::uint8_t> encode_wav16(std::span<const std::int16_t> pcm,
                                       int sample_rate_hz);
std::vector<std::uint8_t> encode_flac16(std::span<const std::int16_t> pcm,
                                        int sample_rate_hz);

// Writes 16-bit PCM as WAV or FLAC and returns the number of clipped samples.
// Throws IoFailure.
std::size_t write_audio(const AudioBuffer& buf,
                        const std::filesystem::path& path, FileFormat format);

}  // namespace lb::audio
