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

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string_view>
#include <variant>

#include "launderbench/audio.hpp"
#include "launderbench/codec.hpp"

namespace lb::dsp {

using audio::AudioBuffer;

enum class NoiseName { kBabble, kVolvo, kWhite, kCafe, kStreet };

inline constexpr std::array<NoiseName, 5> kAllNoiseNames = {
    NoiseName::kBabble, NoiseName::kVolvo, NoiseName::kWhite, NoiseName::kCafe,
    NoiseName::kStreet};

std::string_view to_string(NoiseName name);
std::optional<NoiseName> parse_noise_name(std::string_view text);

// Laundering parameter sets.
inline constexpr std::array<double, 3> kRt60Choices = {0.3, 0.6, 0.9};
inline constexpr std::array<double, 3> kSnrChoicesDb = {0.0, 10.0, 20.0};
inline constexpr std::array<int, 6> kBitrateChoicesKbps = {16, 64, 128, 192, 256, 320};
inline constexpr std::array<int, 4> kResampleChoicesHz = {8000, 11025, 22050, 44100};
inline constexpr int kLowpassCutoffHz = 8000;
inline constexpr int kLowpassOrder = 5;

struct Reverberation {
  double rt60_s = 0.3;
  bool operator==(const Reverberation&) const = default;
};

struct AdditiveNoise {
  NoiseName noise = NoiseName::kWhite;
  double snr_db = 0.0;
  bool operator==(const AdditiveNoise&) const = default;
};

struct Recompression {
  int bitrate_kbps = 128;
  bool operator==(const Recompression&) const = default;
};

struct Resampling {
  int target_rate_hz = 8000;
  bool operator==(const Resampling&) const = default;
};

struct Lowpass {
  int cutoff_hz = kLowpassCutoffHz;
  int order = kLowpassOrder;
  bool operator==(const Lowpass&) const = default;
};

// One laundering attack with its drawn parameters. The variant alternative
// is the attack kind, so only that kind's fields exist.
using AttackSpec =
    std::variant<Reverberation, AdditiveNoise, Recompression, Resampling, Lowpass>;

enum class AttackKind { kReverberation, kAdditiveNoise, kRecompression, kResampling, kLowpass };

AttackKind kind_of(const AttackSpec& spec);
std::string_view to_string(AttackKind kind);

// Throws InvalidParameter if a parameter lies outside its choice set.
void validate_attack(const AttackSpec& spec);

// Noise assets <dir>/{babble,volvo,cafe,street}.wav, loaded on first use and
// resampled to `rate_hz`. White noise is synthesized and never loaded.
// Safe to share between worker threads.
class NoiseLibrary {
 public:
  explicit NoiseLibrary(std::filesystem::path dir, int rate_hz = 16000);

  const std::filesystem::path& directory() const { return dir_; }
  int rate_hz() const { return rate_hz_; }
  std::filesystem::path asset_path(NoiseName name) const;

  // Throws NoiseAssetMissing (naming the asset), InvalidParameter for white,
  // or the read_audio errors.
  std::shared_ptr<const AudioBuffer> get(NoiseName name) const;

  // Registers an in-memory asset, bypassing the directory.
  void insert(NoiseName name, AudioBuffer noise);

  // Throws NoiseAssetMissing for the first file-backed asset that is absent.
  void check_assets_present() const;

 private:
  std::filesystem::path dir_;
  int rate_hz_;
  mutable std::mutex mu_;
  mutable std::map<NoiseName, std::shared_ptr<const AudioBuffer>> cache_;
};

// Dispatches to the transform for the spec's kind. `noises` is required for
// babble/volvo/cafe/street; `backend` and `workdir` for recompression.
// Output always has x's length and rate.
AudioBuffer apply_attack(const AudioBuffer& x, const AttackSpec& spec, std::uint64_t seed,
                         const NoiseLibrary* noises, const audio::CodecBackend* backend,
                         const std::filesystem::path& workdir);

}  // namespace lb::dsp
