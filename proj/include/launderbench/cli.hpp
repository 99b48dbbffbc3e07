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

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "launderbench/codec.hpp"
#include "launderbench/metrics.hpp"
#include "launderbench/protocol.hpp"
#include "launderbench/reporting.hpp"

namespace lb::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitPartial = 2;

// Name of the environment variable holding the config file path.
inline constexpr const char* kConfigEnv = "LAUNDERBENCH_CONFIG";

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path scores;
  std::filesystem::path audio_root;
  std::filesystem::path out_dir;
  std::filesystem::path noise_dir;
  std::uint64_t seed = 0;
  double fraction = 0.1;
  std::size_t parallelism = 1;
  std::string ffmpeg = "ffmpeg";
  std::string encode_cmd;  // empty selects the ffmpeg MP3 backend
  std::string decode_cmd;
  std::string codec_identity;
  metrics::MetricConfig metric;
  bool invert_scores = false;
  protocol::JoinPolicy join = protocol::JoinPolicy::kStrict;
  protocol::ManifestLayout manifest_layout = protocol::ManifestLayout::kNative;
  reporting::Format format = reporting::Format::kTsv;
  std::string prefix = "report";
  std::string layout = "pooled,attack,codec,grid";
};

// Keys accepted in config files; identical to the long flag names.
const std::vector<std::string>& config_keys();

// Parses "key = value" lines. Blank lines and lines starting with '#' are
// ignored; underscores in keys are read as dashes. Throws MalformedLine or
// InvalidParameter (unknown key).
std::map<std::string, std::string> parse_config_text(std::string_view text);

// Defaults, overridden by file values, overridden by flag values. Throws
// InvalidParameter on unparseable values.
RunConfig resolve_config(const std::map<std::string, std::string>& flag_values,
                         const std::map<std::string, std::string>& file_values);

// key=value lines describing every field of the config.
std::string describe_config(const RunConfig& cfg);

audio::CodecBackend make_backend(const RunConfig& cfg);

int cmd_launder(const RunConfig& cfg, std::ostream& out);
int cmd_evaluate(const RunConfig& cfg, std::ostream& out);
int cmd_report(const RunConfig& cfg, std::ostream& out);
int cmd_noise_check(const RunConfig& cfg, std::ostream& out);
int cmd_selftest(const RunConfig& cfg, std::ostream& out);

// Full front end: parses argv, reads the config file named by
// LAUNDERBENCH_CONFIG and dispatches. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out);

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SelftestResult> run_selftest(std::uint64_t seed);

}  // namespace lb::cli
