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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lb::protocol {

enum class Label { kBonafide, kSpoof };

std::string_view to_string(Label label);

inline constexpr std::string_view kNoAttack = "-";
inline constexpr std::string_view kUncodedCodec = "C00";

// One corpus utterance. Attack and codec ids are open vocabulary.
struct TrialRecord {
  std::string utterance_id;
  Label label = Label::kBonafide;
  std::string attack_id{kNoAttack};
  std::string codec_id{kUncodedCodec};
  std::string source_path;

  bool operator==(const TrialRecord&) const = default;
};

// Detector output; higher means more bonafide-like.
struct ScoreRecord {
  std::string utterance_id;
  double score = 0.0;

  bool operator==(const ScoreRecord&) const = default;
};

struct ScoredTrial {
  TrialRecord trial;
  double score = 0.0;
};

struct ManifestStats {
  std::size_t total = 0;
  std::size_t bonafide = 0;
  std::size_t spoof = 0;

  bool operator==(const ManifestStats&) const = default;
};

// Column layouts accepted by parse_manifest.
//   kNative:    "utt label attack codec path", '#' comments.
//   kAsvspoof5: challenge metadata rows
//               "SPEAKER FILE GENDER CODEC CODEC_Q CODEC_SEED ATTACK_TAG
//                ATTACK_LABEL KEY [TMP]"; codec "-" maps to C00, the attack of
//               a bonafide row to "-", and the path to "<FILE>.flac".
enum class ManifestLayout { kNative, kAsvspoof5 };

// Throws MalformedLine (1-based line number) or DuplicateId.
std::vector<TrialRecord> parse_manifest(std::string_view text,
                                        ManifestLayout layout = ManifestLayout::kNative);

// Canonical native form, one LF-terminated line per record.
std::string emit_manifest_line(const TrialRecord& record);
std::string emit_manifest(std::span<const TrialRecord> records);

// "utt score" per line; score in fixed or scientific notation.
// Throws MalformedLine or NonFiniteScore.
std::vector<ScoreRecord> parse_scores(std::string_view text);

// Scores are written in shortest round-trip form.
std::string emit_scores(std::span<const ScoreRecord> scores);

enum class JoinPolicy { kStrict, kIntersect };

struct JoinResult {
  std::vector<ScoredTrial> scored;  // in trial order
  std::size_t dropped_trials = 0;   // trials without a score
  std::size_t dropped_scores = 0;   // scores without a trial
};

// strict: every trial has exactly one score and vice versa, otherwise
// MissingScore / OrphanScore. intersect: inner join, drops are counted.
// Duplicate score ids throw DuplicateId under either policy.
JoinResult join_scores(std::span<const TrialRecord> trials,
                       std::span<const ScoreRecord> scores, JoinPolicy policy);

ManifestStats manifest_stats(std::span<const TrialRecord> trials);

// Whole-file read. Throws IoFailure.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace lb::protocol
