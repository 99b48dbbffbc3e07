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

#include "launderbench/codec.hpp"

#include <array>
#include <cstdio>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "launderbench/dsp.hpp"
#include "launderbench/error.hpp"
#include "launderbench/log.hpp"
#include "launderbench/process.hpp"

namespace lb::audio {
namespace {

std::string make_uuid() {
  static std::mutex mu;
  static std::mt19937_64 gen{std::random_device{}()};
  std::array<std::uint64_t, 2> v;
  {
    std::lock_guard lock(mu);
    v = {gen(), gen()};
  }
  v[0] = (v[0] & ~0xF000ULL) | 0x4000ULL;  // version 4
  v[1] = (v[1] & 0x3FFFFFFFFFFFFFFFULL) | 0x8000000000000000ULL;
  char buf[37];
  std::snprintf(buf, sizeof buf, "%08llx-%04llx-%04llx-%04llx-%012llx",
                static_cast<unsigned long long>(v[0] >> 32),
                static_cast<unsigned long long>((v[0] >> 16) & 0xFFFF),
                static_cast<unsigned long long>(v[0] & 0xFFFF),
                static_cast<unsigned long long>(v[1] >> 48),
                static_cast<unsigned long long>(v[1] & 0xFFFFFFFFFFFFULL));
  return buf;
}

bool contains(const std::string& s, std::string_view needle) {
  return s.find(needle) != std::string::npos;
}

std::string replace_all(std::string s, std::string_view from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos;
       pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::vector<std::string> instantiate(const std::string& tmpl,
                                     const std::string& in, const std::string& out,
                                     const std::string& kbps) {
  std::vector<std::string> argv = split_command_line(tmpl);
  for (std::string& a : argv) {
    a = replace_all(std::move(a), "{in}", in);
    a = replace_all(std::move(a), "{out}", out);
    a = replace_all(std::move(a), "{bitrate_kbps}", kbps);
  }
  return argv;
}

void run_step(const std::vector<std::string>& argv, const std::filesystem::path& expected,
              const char* step) {
  const ProcessResult r = run_process(argv);
  std::error_code ec;
  if (r.exit_code != 0) {
    std::string tail = r.stderr_text.size() > 400
                           ? r.stderr_text.substr(r.stderr_text.size() - 400)
                           : r.stderr_text;
    throw BackendInvocationFailed(std::string(step) + " command '" + argv[0] +
                                  "' exited with status " + std::to_string(r.exit_code) +
                                  (tail.empty() ? "" : ": " + tail));
  }
  if (!std::filesystem::exists(expected, ec)) {
    throw BackendInvocationFailed(std::string(step) + " command did not produce " +
                                  expected.string());
  }
}

// Removes the listed files when the round trip finishes, successfully or not.
struct ScopedCleanup {
  std::vector<std::filesystem::path> paths;
  ~ScopedCleanup() {
    for (const auto& p : paths) {
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }
  }
};

}  // namespace

void validate_backend(const CodecBackend& backend) {
  for (const char* p : {"{in}", "{out}", "{bitrate_kbps}"}) {
    if (!contains(backend.encode_command_template, p)) {
      throw InvalidParameter(std::string("encode command template lacks ") + p);
    }
  }
  for (const char* p : {"{in}", "{out}"}) {
    if (!contains(backend.decode_command_template, p)) {
      throw InvalidParameter(std::string("decode command template lacks ") + p);
    }
  }
  if (split_command_line(backend.encode_command_template).empty() ||
      split_command_line(backend.decode_command_template).empty()) {
    throw InvalidParameter("empty codec command template");
  }
}

CodecBackend ffmpeg_mp3_backend(const std::string& ffmpeg) {
  const std::string exe = "'" + ffmpeg + "'";
  CodecBackend b;
  b.encode_command_template = exe +
      " -hide_banner -loglevel error -nostdin -y -i {in} -codec:a libmp3lame"
      " -b:a {bitrate_kbps}k {out}";
  b.decode_command_template =
      exe + " -hide_banner -loglevel error -nostdin -y -i {in} -codec:a pcm_s16le {out}";
  b.identity = "ffmpeg-libmp3lame";
  return b;
}

AudioBuffer codec_roundtrip(const AudioBuffer& buf, int bitrate_kbps,
                            const CodecBackend& backend,
                            const std::filesystem::path& workdir) {
  if (bitrate_kbps <= 0) throw InvalidParameter("bitrate must be positive");
  validate_backend(backend);
  std::error_code ec;
  std::filesystem::create_directories(workdir, ec);
  if (ec) throw IoFailure("cannot create codec workdir " + workdir.string());

  const std::string id = make_uuid();
  const auto wav_in = workdir / (id + ".wav");
  const auto mp3 = workdir / (id + ".mp3");
  const auto wav_out = workdir / (id + ".decoded.wav");
  ScopedCleanup cleanup{{wav_in, mp3, wav_out}};

  write_audio(buf, wav_in, FileFormat::kWav16);
  run_step(instantiate(backend.encode_command_template, wav_in.string(), mp3.string(),
                       std::to_string(bitrate_kbps)),
           mp3, "encode");
  run_step(instantiate(backend.decode_command_template, mp3.string(), wav_out.string(),
                       std::to_string(bitrate_kbps)),
           wav_out, "decode");

  AudioBuffer decoded = [&] {
    try {
      return read_audio(wav_out);
    } catch (const Error& e) {
      throw BackendInvocationFailed(std::string("decoded output unreadable: ") + e.what());
    }
  }();
  if (decoded.sample_rate_hz() != buf.sample_rate_hz()) {
    log_warning("codec '" + backend.identity + "' changed the sample rate from " +
                std::to_string(buf.sample_rate_hz()) + " to " +
                std::to_string(decoded.sample_rate_hz()) + " Hz; resampling back");
    decoded = dsp::resample(decoded, buf.sample_rate_hz());
  }
  std::vector<double> samples = std::move(decoded).release_samples();
  samples.resize(buf.size(), 0.0);
  return AudioBuffer(std::move(samples), buf.sample_rate_hz());
}

}  // namespace lb::audio
