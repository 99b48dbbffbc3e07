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

#include "test_util.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <unistd.h>

#include "launderbench/dsp.hpp"
#include "launderbench/rng.hpp"

namespace lb::testing {
namespace fs = std::filesystem;

TempDir::TempDir(std::string_view tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          (std::string(tag) + "-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter.fetch_add(1)));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

audio::AudioBuffer sine(double freq_hz, int rate_hz, double seconds, double amplitude) {
  const auto n = static_cast<std::size_t>(std::llround(seconds * rate_hz));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / rate_hz);
  }
  return audio::AudioBuffer(std::move(x), rate_hz);
}

audio::AudioBuffer speechlike(int rate_hz, double seconds, std::uint64_t seed) {
  Rng rng(seed);
  const auto n = static_cast<std::size_t>(std::llround(seconds * rate_hz));
  const double f0 = 100.0 + 120.0 * rng.uniform();
  const double syllable_hz = 3.0 + 2.0 * rng.uniform();
  std::vector<double> x(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate_hz;
    const double pitch = f0 * (1.0 + 0.1 * std::sin(2.0 * std::numbers::pi * 0.7 * t));
    phase += 2.0 * std::numbers::pi * pitch / rate_hz;
    double v = 0.0;
    for (int h = 1; h <= 8; ++h) {
      if (pitch * h < rate_hz / 2.0) v += std::sin(h * phase) / h;
    }
    const double env = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * syllable_hz * t));
    x[i] = 0.25 * env * v + 0.01 * rng.gaussian();
  }
  return audio::AudioBuffer(std::move(x), rate_hz);
}

void write_noise_assets(const fs::path& dir, int rate_hz, double seconds) {
  fs::create_directories(dir);
  const auto n = static_cast<std::size_t>(std::llround(seconds * rate_hz));

  // babble: several overlapping talkers
  std::vector<double> babble(n, 0.0);
  for (int k = 0; k < 6; ++k) {
    const audio::AudioBuffer talker = speechlike(rate_hz, seconds, 1000 + k);
    for (std::size_t i = 0; i < n; ++i) babble[i] += talker[i] / 3.0;
  }

  // volvo: strongly low-passed noise (engine rumble)
  Rng rng(77);
  std::vector<double> volvo(n);
  double lp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lp = 0.995 * lp + 0.05 * rng.gaussian();
    volvo[i] = lp;
  }

  // cafe: babble bed with clinks
  std::vector<double> cafe(n);
  for (std::size_t i = 0; i < n; ++i) {
    cafe[i] = 0.5 * babble[i] + 0.02 * rng.gaussian();
    if (i % 4000 < 40) cafe[i] += 0.3 * std::sin(2.0 * std::numbers::pi * 3000.0 * i / rate_hz);
  }

  // street: broadband noise with slow level changes
  std::vector<double> street(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate_hz;
    street[i] = (0.1 + 0.05 * std::sin(2.0 * std::numbers::pi * 0.5 * t)) * rng.gaussian();
  }

  auto put = [&](const char* name, std::vector<double> v) {
    double peak = 0.0;
    for (double s : v) peak = std::max(peak, std::abs(s));
    for (double& s : v) s *= 0.5 / peak;
    audio::write_audio(audio::AudioBuffer(std::move(v), rate_hz), dir / (std::string(name) + ".wav"),
                       audio::FileFormat::kWav16);
  };
  put("babble", std::move(babble));
  put("volvo", std::move(volvo));
  put("cafe", std::move(cafe));
  put("street", std::move(street));
}

Corpus make_corpus(const fs::path& dir, std::size_t n, std::uint64_t seed, double seconds,
                   int rate_hz) {
  Corpus c;
  c.audio_root = dir / "audio";
  c.manifest_path = dir / "manifest.txt";
  fs::create_directories(c.audio_root);
  for (std::size_t i = 0; i < n; ++i) {
    protocol::TrialRecord r;
    char id[32];
    std::snprintf(id, sizeof(id), "U%05zu", i);
    r.utterance_id = id;
    if (i % 4 == 0) {
      r.label = protocol::Label::kBonafide;
      r.attack_id = "-";
    } else {
      r.label = protocol::Label::kSpoof;
      r.attack_id = "A" + std::to_string(17 + i % 16);
    }
    char codec[8];
    std::snprintf(codec, sizeof(codec), "C%02zu", (i / 3) % 12);
    r.codec_id = codec;
    r.source_path = "flac/" + r.utterance_id + ".flac";
    fs::create_directories((c.audio_root / r.source_path).parent_path());
    audio::write_audio(speechlike(rate_hz, seconds, seed * 1000003 + i), c.audio_root / r.source_path,
                       audio::FileFormat::kFlac);
    c.trials.push_back(std::move(r));
  }
  write_text(c.manifest_path, protocol::emit_manifest(c.trials));
  return c;
}

std::vector<std::uint8_t> read_bytes(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + p.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& p, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const fs::path& p, std::string_view text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  f << text;
}

std::string ffmpeg_path() { return LB_TEST_FFMPEG; }

std::string mock_codec_path() { return LB_TEST_MOCK_CODEC; }

audio::CodecBackend mock_backend() {
  return {mock_codec_path() + " encode {in} {out} {bitrate_kbps}",
          mock_codec_path() + " decode {in} {out}", "mock-codec"};
}

}  // namespace lb::testing
