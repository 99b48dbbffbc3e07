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

#include "launderbench/error.hpp"
#include "launderbench/protocol.hpp"
#include "launderbench/rng.hpp"
#include "test_util.hpp"

namespace lb::protocol {
namespace {

std::string random_token(Rng& rng, std::size_t max_len) {
  static const char kAlphabet[] =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_-./:+";
  const std::size_t len = 1 + rng.below(max_len);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s += kAlphabet[rng.below(sizeof(kAlphabet) - 1)];
  return s;
}

std::vector<TrialRecord> random_records(Rng& rng, std::size_t n) {
  std::vector<TrialRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    TrialRecord r;
    r.utterance_id = random_token(rng, 12) + "#" + std::to_string(i);  // unique; '#' mid-token
    r.label = rng.below(2) ? Label::kBonafide : Label::kSpoof;
    r.attack_id = r.label == Label::kBonafide ? "-" : "A" + std::to_string(rng.below(100));
    r.codec_id = random_token(rng, 4);
    r.source_path = random_token(rng, 30);
    out.push_back(std::move(r));
  }
  return out;
}

TEST(ParseManifest, NativeLayoutWithCommentsAndBlankLines) {
  const std::string text =
      "# utt label attack codec path\n"
      "\n"
      "u1 bonafide - C00 a/u1.flac\n"
      "u2\tspoof  A17 C03 a/u2.flac   # trailing comment\n"
      "   u3 spoof A30 C11 b/u3.wav\r\n";
  const std::vector<TrialRecord> t = parse_manifest(text);
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[0], (TrialRecord{"u1", Label::kBonafide, "-", "C00", "a/u1.flac"}));
  EXPECT_EQ(t[1], (TrialRecord{"u2", Label::kSpoof, "A17", "C03", "a/u2.flac"}));
  EXPECT_EQ(t[2], (TrialRecord{"u3", Label::kSpoof, "A30", "C11", "b/u3.wav"}));
}

TEST(ParseManifest, EmptyTextGivesNoRecords) {
  EXPECT_TRUE(parse_manifest("").empty());
  EXPECT_TRUE(parse_manifest("# only a comment\n\n").empty());
}

void expect_malformed_at(const std::string& text, std::size_t line) {
  try {
    parse_manifest(text);
    FAIL() << "expected MalformedLine for: " << text;
  } catch (const MalformedLine& e) {
    EXPECT_EQ(e.line(), line) << e.what();
  }
}

TEST(ParseManifest, MalformedLinesReportLineNumbers) {
  expect_malformed_at("u1 bonafide - C00\n", 1);
  expect_malformed_at("u1 bonafide - C00 p\nu2 spoof A1 C00 p extra\n", 2);
  expect_malformed_at("\n\nu1 genuine - C00 p\n", 3);
  expect_malformed_at("u1 bonafide A17 C00 p\n", 1);
  expect_malformed_at("u1 spoof - C00 p\n", 1);
}

TEST(ParseManifest, DuplicateIdNamesBothLines) {
  try {
    parse_manifest("u1 bonafide - C00 p\nu2 spoof A1 C00 q\nu1 spoof A2 C00 r\n");
    FAIL() << "expected DuplicateId";
  } catch (const DuplicateId& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("line 1"), std::string::npos) << msg;
  }
}

TEST(ParseManifest, Asvspoof5MetadataColumns) {
  const std::string text =
      "T_4850 T_0000000000 F - - - AC3 - bonafide -\n"
      "T_1111 T_0000000001 M mp3 4 7 AC1 A05 spoof -\n";
  const std::vector<TrialRecord> t = parse_manifest(text, ManifestLayout::kAsvspoof5);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0], (TrialRecord{"T_0000000000", Label::kBonafide, "-", "C00", "T_0000000000.flac"}));
  EXPECT_EQ(t[1], (TrialRecord{"T_0000000001", Label::kSpoof, "A05", "mp3", "T_0000000001.flac"}));
  EXPECT_THROW(parse_manifest("a b c d\n", ManifestLayout::kAsvspoof5), MalformedLine);
  EXPECT_THROW(parse_manifest("s u F - - - x - maybe -\n", ManifestLayout::kAsvspoof5),
               MalformedLine);
  EXPECT_THROW(parse_manifest("s u F - - - x - spoof -\n", ManifestLayout::kAsvspoof5),
               MalformedLine);
}

TEST(Manifest, EmitParseIdentityOverRandomCorpus) {
  Rng rng(2024);
  const std::vector<TrialRecord> records = random_records(rng, 1000);
  const std::string text = emit_manifest(records);
  EXPECT_EQ(parse_manifest(text), records);
  EXPECT_EQ(emit_manifest(parse_manifest(text)), text);
}

TEST(Manifest, StatsCountLabels) {
  // Augmented training set: original bonafide and spoof counts plus nine
  // laundered copies of every selected file.
  constexpr std::size_t kBonafide = 35404, kSpoof = 311068;
  std::string text;
  text.reserve((kBonafide + kSpoof) * 32);
  for (std::size_t i = 0; i < kBonafide + kSpoof; ++i) {
    const bool bona = i < kBonafide;
    text += "x" + std::to_string(i) + (bona ? " bonafide - C00 p\n" : " spoof A01 C00 p\n");
  }
  const ManifestStats s = manifest_stats(parse_manifest(text));
  EXPECT_EQ(s, (ManifestStats{346472, kBonafide, kSpoof}));
}

TEST(Scores, ParseAcceptsCommonNumberForms) {
  const std::vector<ScoreRecord> s =
      parse_scores("a 1.5\nb -2\nc +3e-2\n# comment\n\nd 1E300  # c\ne -0\n");
  ASSERT_EQ(s.size(), 5u);
  EXPECT_EQ(s[0], (ScoreRecord{"a", 1.5}));
  EXPECT_EQ(s[1].score, -2.0);
  EXPECT_EQ(s[2].score, 0.03);
  EXPECT_EQ(s[3].score, 1e300);
  EXPECT_TRUE(std::signbit(s[4].score));
}

TEST(Scores, NonFiniteRejectedWithLineNumber) {
  for (const char* bad : {"nan", "NaN", "inf", "-inf", "1e999"}) {
    try {
      parse_scores(std::string("a 0.5\nb ") + bad + "\n");
      FAIL() << bad;
    } catch (const NonFiniteScore& e) {
      EXPECT_EQ(e.line(), 2u) << bad;
    }
  }
}

TEST(Scores, GarbageRejected) {
  EXPECT_THROW(parse_scores("a 1.5x\n"), MalformedLine);
  EXPECT_THROW(parse_scores("a\n"), MalformedLine);
  EXPECT_THROW(parse_scores("a 1 2\n"), MalformedLine);
  EXPECT_THROW(parse_scores("a ++1\n"), MalformedLine);
  EXPECT_THROW(parse_scores("a 0x10\n"), MalformedLine);
}

TEST(Scores, EmitParseIdentityIsBitExact) {
  Rng rng(7);
  std::vector<ScoreRecord> scores;
  for (int i = 0; i < 1000; ++i) {
    double v;
    switch (rng.below(4)) {
      case 0: v = rng.gaussian() * 10; break;
      case 1: v = std::ldexp(rng.uniform(), static_cast<int>(rng.below(600)) - 300); break;
      case 2: v = static_cast<double>(static_cast<int>(rng.below(200)) - 100); break;
      default: {
        std::uint64_t bits;
        do {
          bits = rng.next_u64();
          std::memcpy(&v, &bits, sizeof v);
        } while (!std::isfinite(v));
      }
    }
    scores.push_back({"utt" + std::to_string(i), v});
  }
  scores.push_back({"max", std::numeric_limits<double>::max()});
  scores.push_back({"denorm", std::numeric_limits<double>::denorm_min()});
  const std::string text = emit_scores(scores);
  const std::vector<ScoreRecord> back = parse_scores(text);
  ASSERT_EQ(back.size(), scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    EXPECT_EQ(std::memcmp(&back[i].score, &scores[i].score, sizeof(double)), 0) << i;
  }
  EXPECT_EQ(emit_scores(back), text);
}

std::vector<TrialRecord> three_trials() {
  return parse_manifest("a bonafide - C00 p\nb spoof A1 C00 p\nc spoof A2 C01 p\n");
}

TEST(JoinScores, StrictRequiresExactCoverage) {
  const auto trials = three_trials();
  const JoinResult ok = join_scores(trials, parse_scores("c 3\na 1\nb 2\n"), JoinPolicy::kStrict);
  ASSERT_EQ(ok.scored.size(), 3u);
  EXPECT_EQ(ok.scored[0].trial.utterance_id, "a");  // trial order
  EXPECT_EQ(ok.scored[2].score, 3.0);

  try {
    join_scores(trials, parse_scores("a 1\nz 9\n"), JoinPolicy::kStrict);
    FAIL();
  } catch (const MissingScore& e) {
    EXPECT_EQ(e.ids(), (std::vector<std::string>{"b", "c"}));
  }
  try {
    join_scores(trials, parse_scores("a 1\nb 1\nc 1\nz 9\n"), JoinPolicy::kStrict);
    FAIL();
  } catch (const OrphanScore& e) {
    EXPECT_EQ(e.ids(), (std::vector<std::string>{"z"}));
  }
}

TEST(JoinScores, IntersectDropsAndCounts) {
  const JoinResult r =
      join_scores(three_trials(), parse_scores("a 1\nz 9\ny 8\n"), JoinPolicy::kIntersect);
  ASSERT_EQ(r.scored.size(), 1u);
  EXPECT_EQ(r.dropped_trials, 2u);
  EXPECT_EQ(r.dropped_scores, 2u);
  const JoinResult empty = join_scores(three_trials(), {}, JoinPolicy::kIntersect);
  EXPECT_TRUE(empty.scored.empty());
}

TEST(JoinScores, DuplicateScoreIdRejected) {
  EXPECT_THROW(join_scores(three_trials(), parse_scores("a 1\na 2\n"), JoinPolicy::kIntersect),
               DuplicateId);
}

TEST(ReadTextFile, MissingFileIsIoFailure) {
  testing::TempDir dir;
  EXPECT_THROW(read_text_file(dir / "missing.txt"), IoFailure);
  testing::write_text(dir / "x.txt", "hello");
  EXPECT_EQ(read_text_file(dir / "x.txt"), "hello");
}

}  // namespace
}  // namespace lb::protocol
