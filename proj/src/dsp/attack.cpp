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

#include "launderbench/attack.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>

#include "launderbench/dsp.hpp"
#include "launderbench/error.hpp"
#include "launderbench/rng.hpp"

namespace lb::dsp {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

template <typename Range, typename T>
bool one_of(const Range& r, T v) {
  return std::find(r.begin(), r.end(), v) != r.end();
}

}  // namespace

std::string_view to_string(NoiseName name) {
  switch (name) {
    case NoiseName::kBabble: return "babble";
    case NoiseName::kVolvo: return "volvo";
    case NoiseName::kWhite: return "white";
    case NoiseName::kCafe: return "cafe";
    case NoiseName::kStreet: return "street";
  }
  return "?";
}

std::optional<NoiseName> parse_noise_name(std::string_view text) {
  for (NoiseName n : kAllNoiseNames) {
    if (to_string(n) == text) return n;
  }
  return std::nullopt;
}

AttackKind kind_of(const AttackSpec& spec) {
  return static_cast<AttackKind>(spec.index());
}

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::kReverberation: return "reverberation";
    case AttackKind::kAdditiveNoise: return "additive_noise";
    case AttackKind::kRecompression: return "recompression";
    case AttackKind::kResampling: return "resampling";
    case AttackKind::kLowpass: return "lowpass";
  }
  return "?";
}

void validate_attack(const AttackSpec& spec) {
  std::visit(
      overloaded{
          [](const Reverberation& a) {
            if (!one_of(kRt60Choices, a.rt60_s)) {
              throw InvalidParameter("RT60 " + std::to_string(a.rt60_s) +
                                     " s is not one of 0.3/0.6/0.9");
            }
          },
          [](const AdditiveNoise& a) {
            if (!one_of(kSnrChoicesDb, a.snr_db)) {
              throw InvalidParameter("SNR " + std::to_string(a.snr_db) +
                                     " dB is not one of 0/10/20");
            }
          },
          [](const Recompression& a) {
            if (!one_of(kBitrateChoicesKbps, a.bitrate_kbps)) {
              throw InvalidParameter("bitrate " + std::to_string(a.bitrate_kbps) +
                                     " kbit/s is not a supported choice");
            }
          },
          [](const Resampling& a) {
            if (!one_of(kResampleChoicesHz, a.target_rate_hz)) {
              throw InvalidParameter("resampling rate " + std::to_string(a.target_rate_hz) +
                                     " Hz is not a supported choice");
            }
          },
          [](const Lowpass& a) {
            if (a.cutoff_hz != kLowpassCutoffHz || a.order != kLowpassOrder) {
              throw InvalidParameter("lowpass must be 8000 Hz, order 5");
            }
          },
      },
      spec);
}

NoiseLibrary::NoiseLibrary(std::filesystem::path dir, int rate_hz)
    : dir_(std::move(dir)), rate_hz_(rate_hz) {
  if (rate_hz <= 0) throw InvalidParameter("noise library rate must be positive");
}

std::filesystem::path NoiseLibrary::asset_path(NoiseName name) const {
  return dir_ / (std::string(to_string(name)) + ".wav");
}

std::shared_ptr<const AudioBuffer> NoiseLibrary::get(NoiseName name) const {
  if (name == NoiseName::kWhite) {
    throw InvalidParameter("white noise is synthesized, not loaded");
  }
  std::lock_guard lock(mu_);
  if (auto it = cache_.find(name); it != cache_.end()) return it->second;

  const std::filesystem::path path = asset_path(name);
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw NoiseAssetMissing("noise asset '" + std::string(to_string(name)) +
                            "' not found at " + path.string());
  }
  AudioBuffer noise = audio::read_audio(path);
  if (noise.empty()) throw CorruptFile("noise asset " + path.string() + " is empty");
  if (noise.sample_rate_hz() != rate_hz_) noise = resample(noise, rate_hz_);
  auto shared = std::make_shared<const AudioBuffer>(std::move(noise));
  cache_.emplace(name, shared);
  return shared;
}

void NoiseLibrary::insert(NoiseName name, AudioBuffer noise) {
  if (noise.empty()) throw InvalidParameter("noise asset is empty");
  if (noise.sample_rate_hz() != rate_hz_) noise = resample(noise, rate_hz_);
  std::lock_guard lock(mu_);
  cache_[name] = std::make_shared<const AudioBuffer>(std::move(noise));
}

void NoiseLibrary::check_assets_present() const {
  for (NoiseName n : kAllNoiseNames) {
    if (n == NoiseName::kWhite) continue;
    {
      std::lock_guard lock(mu_);
      if (cache_.count(n) != 0) continue;
    }
    std::error_code ec;
    if (!std::filesystem::is_regular_file(asset_path(n), ec)) {
      throw NoiseAssetMissing("noise asset '" + std::string(to_string(n)) +
                              "' not found at " + asset_path(n).string());
    }
  }
}

AudioBuffer apply_attack(const AudioBuffer& x, const AttackSpec& spec, std::uint64_t seed,
                         const NoiseLibrary* noises, const audio::CodecBackend* backend,
                         const std::filesystem::path& workdir) {
  validate_attack(spec);
  return std::visit(
      overloaded{
          [&](const Reverberation& a) { return apply_reverberation(x, a.rt60_s, seed); },
          [&](const AdditiveNoise& a) {
            if (x.empty()) throw SilentInput("empty signal");
            if (a.noise == NoiseName::kWhite) {
              AudioBuffer white(generate_white_noise(x.size(), derive_seed(seed, {"white"})),
                                x.sample_rate_hz());
              return mix_noise(x, white, a.snr_db, seed);
            }
            if (noises == nullptr) {
              throw InvalidParameter("additive noise attack needs a noise library");
            }
            std::shared_ptr<const AudioBuffer> noise = noises->get(a.noise);
            if (noise->sample_rate_hz() != x.sample_rate_hz()) {
              return mix_noise(x, resample(*noise, x.sample_rate_hz()), a.snr_db, seed);
            }
            return mix_noise(x, *noise, a.snr_db, seed);
          },
          [&](const Recompression& a) {
            if (backend == nullptr) {
              throw InvalidParameter("recompression attack needs a codec backend");
            }
            return audio::codec_roundtrip(x, a.bitrate_kbps, *backend, workdir);
          },
          [&](const Resampling& a) { return launder_resample(x, a.target_rate_hz); },
          [&](const Lowpass& a) {
            const FilterCoefficients c =
                design_butterworth_lowpass(a.order, a.cutoff_hz, x.sample_rate_hz());
            return apply_filter(x, c);
          },
      },
      spec);
}

}  // namespace lb::dsp
