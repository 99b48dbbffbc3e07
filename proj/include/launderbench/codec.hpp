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

#include <filesystem>
#include <string>

#include "launderbench/audio.hpp"

namespace lb::audio {

// External lossy codec driven by two argv templates. Placeholders are
// substituted literally inside each token:
//   encode: {in} {out} {bitrate_kbps}
//   decode: {in} {out}
// `identity` is free-form and is recorded in manifests and run summaries.
struct CodecBackend {
  std::string encode_command_template;
  std::string decode_command_template;
  std::string identity;
};

// Throws InvalidParameter when a template is missing a placeholder or cannot
// be tokenized.
void validate_backend(const CodecBackend& backend);

// ffmpeg + libmp3lame templates.
CodecBackend ffmpeg_mp3_backend(const std::string& ffmpeg = "ffmpeg");

// Encodes `buf` (as 16-bit WAV) at the given bitrate, decodes it back and
// returns audio at buf's rate and length. Decoded audio is trimmed or
// zero-padded at the end (alignment at sample 0). A decoder that changes the
// rate is tolerated: the output is resampled back and a warning is logged.
// Temporary files <uuid>.wav / <uuid>.mp3 live in `workdir` and are removed.
// Throws BackendInvocationFailed.
AudioBuffer codec_roundtrip(const AudioBuffer& buf, int bitrate_kbps,
                            const CodecBackend& backend,
                            const std::filesystem::path& workdir);

}  // namespace lb::audio
