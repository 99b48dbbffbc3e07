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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "launderbench/cli.hpp"
#include "launderbench/error.hpp"
#include "launderbench/process.hpp"
#include "launderbench/rng.hpp"
#include "test_util.hpp"

namespace lb::cli {
namespace {

namespace fs = std::filesystem;
using protocol::Label;
using protocol::TrialRecord;

ProcessResult cli(const std::vector<std::string>& args, const std::vector<std::string>& env = {}) {
  std::vector<std::string> argv = {LB_TEST_CLI};
  argv.insert(argv.end(), args.begin(), args.end());
  return run_process(argv, env);
}

std::string value_of(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return "<missing " + key + ">";
}

std::size_t line_count(const fs::path& p) {
  const auto bytes = testing::read_bytes(p);
  return static_cast<std::size_t>(std::count(bytes.begin(), bytes.end(), '\n'));
}

TrialRecord record(std::string id, Label label, std::string attack, std::string codec = "C00") {
  TrialRecord r;
  r.utterance_id = std::move(id);
  r.label = label;
  r.attack_id = label == Label::kBonafide ? std::string(protocol::kNoAttack) : std::move(attack);
  r.codec_id = std::move(codec);
  r.source_path = "flac/" + r.utterance_id + ".flac";
  return r;
}

// Writes manifest.txt and scores.txt for the given trials and scores.
void write_scored(const fs::path& dir, const std::vector<TrialRecord>& trials,
                  const std::vector<double>& scores) {
  testing::write_text(dir / "manifest.txt", protocol::emit_manifest(trials));
  std::vector<protocol::ScoreRecord> s;
  for (std::size_t i = 0; i < trials.size(); ++i) s.push_back({trials[i].utterance_id, scores[i]});
  testing::write_text(dir / "scores.txt", protocol::emit_scores(s));
}

// ----------------------------------------------------------------- config

TEST(Config, ParseText) {
  const auto kv = parse_config_text("# comment\n\nseed = 7\nnoise_dir=/x/y\r\nc-fa=2\n");
  EXPECT_EQ(kv.at("seed"), "7");
  EXPECT_EQ(kv.at("noise-dir"), "/x/y");
  EXPECT_EQ(kv.at("c-fa"), "2");
  EXPECT_THROW(parse_config_text("seed 7\n"), MalformedLine);
  EXPECT_THROW(parse_config_text("colour=blue\n"), InvalidParameter);
}

TEST(Config, FlagsOverrideFileOverrideDefaults) {
  const RunConfig defaults = resolve_config({}, {});
  EXPECT_EQ(defaults.seed, 0u);
  EXPECT_DOUBLE_EQ(defaults.fraction, 0.1);
  EXPECT_DOUBLE_EQ(defaults.metric.c_fa, 10.0);
  const RunConfig cfg =
      resolve_config({{"seed", "3"}}, {{"seed", "9"}, {"fraction", "0.5"}, {"join", "intersect"}});
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_DOUBLE_EQ(cfg.fraction, 0.5);
  EXPECT_EQ(cfg.join, protocol::JoinPolicy::kIntersect);
  EXPECT_NE(describe_config(cfg).find("seed=3\n"), std::string::npos);
  EXPECT_THROW(resolve_config({{"seed", "-1"}}, {}), InvalidParameter);
  EXPECT_THROW(resolve_config({{"fraction", "abc"}}, {}), InvalidParameter);
  EXPECT_THROW(resolve_config({{"format", "xls"}}, {}), InvalidParameter);
}

TEST(Config, BackendSelection) {
  RunConfig cfg;
  EXPECT_NE(make_backend(cfg).encode_command_template.find("libmp3lame"), std::string::npos);
  cfg.encode_cmd = "enc {in} {out} {bitrate_kbps}";
  EXPECT_THROW(make_backend(cfg), InvalidParameter);
  cfg.decode_cmd = "dec {in} {out}";
  const std::string id = make_backend(cfg).identity;
  EXPECT_EQ(id.rfind("custom-", 0), 0u);
  EXPECT_EQ(id, make_backend(cfg).identity);
  cfg.codec_identity = "lame-3.100";
  EXPECT_EQ(make_backend(cfg).identity, "lame-3.100");
}

TEST(Config, EnvironmentFileAndFlagPrecedence) {
  testing::TempDir dir;
  write_scored(dir.path(),
               {record("b0", Label::kBonafide, ""), record("b1", Label::kBonafide, ""),
                record("s0", Label::kSpoof, "A17"), record("s1", Label::kSpoof, "A17")},
               {1, 2, -0.3, -2});
  const std::vector<std::string> args = {"evaluate", "--manifest", (dir / "manifest.txt").string(),
                                         "--scores", (dir / "scores.txt").string()};
  testing::write_text(dir / "lb.conf", "c_fa = 1\npi_spoof = 0.5\n");
  const std::string env = std::string(kConfigEnv) + "=" + (dir / "lb.conf").string();

  const ProcessResult plain = cli(args);
  ASSERT_EQ(plain.exit_code, 0) << plain.stderr_text;
  EXPECT_EQ(value_of(plain.stdout_text, "act_dcf"), "0.500000");

  const ProcessResult from_file = cli(args, {env});
  ASSERT_EQ(from_file.exit_code, 0) << from_file.stderr_text;
  EXPECT_EQ(value_of(from_file.stdout_text, "act_dcf"), "0.000000");

  std::vector<std::string> with_flag = args;
  with_flag.insert(with_flag.end(), {"--pi-spoof", "0.05"});
  const ProcessResult flagged = cli(with_flag, {env});
  ASSERT_EQ(flagged.exit_code, 0) << flagged.stderr_text;
  EXPECT_EQ(value_of(flagged.stdout_text, "act_dcf"), "1.000000");

  testing::write_text(dir / "bad.conf", "volume=11\n");
  const ProcessResult bad = cli(args, {std::string(kConfigEnv) + "=" + (dir / "bad.conf").string()});
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.stderr_text.find("volume"), std::string::npos);
}

// ---------------------------------------------------------------- launder

struct LaunderSetup {
  testing::TempDir dir;
  testing::Corpus corpus;
  fs::path noise;

  explicit LaunderSetup(std::size_t n) : corpus(testing::make_corpus(dir.path(), n, 11)) {
    noise = dir / "noise";
    testing::write_noise_assets(noise);
  }

  std::vector<std::string> args(const fs::path& out) const {
    return {"launder",     "--manifest",   corpus.manifest_path.string(),
            "--audio-root", corpus.audio_root.string(),
            "--noise-dir", noise.string(), "--out", out.string(), "--seed", "5",
            "--fraction",  "0.1",
            "--encode-cmd", testing::mock_codec_path() + " encode {in} {out} {bitrate_kbps}",
            "--decode-cmd", testing::mock_codec_path() + " decode {in} {out}",
            "--codec-identity", "mock-codec"};
  }
};

TEST(Launder, TenFilesYieldNineOutputs) {
  LaunderSetup s(10);
  const fs::path out = s.dir / "out";
  const ProcessResult r = cli(s.args(out));
  ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
  EXPECT_EQ(value_of(r.stdout_text, "jobs_total"), "9");
  EXPECT_EQ(value_of(r.stdout_text, "jobs_succeeded"), "9");
  EXPECT_EQ(value_of(r.stdout_text, "jobs_failed"), "0");
  EXPECT_EQ(line_count(out / "augmented_manifest.txt"), 19u);

  std::size_t flacs = 0;
  for (const auto& e : fs::recursive_directory_iterator(out)) {
    flacs += e.path().extension() == ".flac";
    EXPECT_EQ(e.path().filename().string().find(".work"), std::string::npos);
    EXPECT_NE(e.path().extension(), ".partial");
  }
  EXPECT_EQ(flacs, 9u);

  const std::string manifest = protocol::read_text_file(out / "augmented_manifest.txt");
  EXPECT_NE(manifest.find("backend=mock-codec"), std::string::npos);
  const auto parsed = protocol::parse_manifest(manifest);
  ASSERT_EQ(parsed.size(), 19u);
  for (std::size_t i = 10; i < parsed.size(); ++i) {
    EXPECT_TRUE(fs::is_regular_file(out / parsed[i].source_path)) << parsed[i].source_path;
  }

  const std::string summary = protocol::read_text_file(out / "run_summary.txt");
  EXPECT_EQ(value_of(summary, "records_total"), "10");
  EXPECT_EQ(value_of(summary, "records_selected"), "1");
  EXPECT_EQ(value_of(summary, "augmented_records"), "19");
  EXPECT_EQ(value_of(summary, "codec_backend"), "mock-codec");
}

TEST(Launder, RerunIsByteIdentical) {
  LaunderSetup s(10);
  auto a = s.args(s.dir / "a");
  auto b = s.args(s.dir / "b");
  b.insert(b.end(), {"--jobs", "3"});
  ASSERT_EQ(cli(a).exit_code, 0);
  ASSERT_EQ(cli(b).exit_code, 0);
  EXPECT_EQ(testing::read_bytes(s.dir / "a" / "augmented_manifest.txt"),
            testing::read_bytes(s.dir / "b" / "augmented_manifest.txt"));
  for (const auto& e : fs::recursive_directory_iterator(s.dir / "a")) {
    if (e.path().extension() != ".flac") continue;
    const fs::path rel = fs::relative(e.path(), s.dir / "a");
    EXPECT_EQ(testing::read_bytes(e.path()), testing::read_bytes(s.dir / "b" / rel)) << rel;
  }
}

TEST(Launder, MissingNoiseAssetFailsBeforeAnyOutput) {
  LaunderSetup s(10);
  fs::remove(s.noise / "cafe.wav");
  const fs::path out = s.dir / "out";
  const ProcessResult r = cli(s.args(out));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.stderr_text.find("cafe"), std::string::npos) << r.stderr_text;
  EXPECT_FALSE(fs::exists(out));
}

TEST(Launder, MissingCodecProgramFailsBeforeAnyOutput) {
  LaunderSetup s(10);
  auto args = s.args(s.dir / "out");
  auto it = std::find(args.begin(), args.end(), "--encode-cmd");
  *(it + 1) = "/nonexistent/encoder {in} {out} {bitrate_kbps}";
  const ProcessResult r = cli(args);
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.stderr_text.find("/nonexistent/encoder"), std::string::npos);
  EXPECT_FALSE(fs::exists(s.dir / "out"));
}

TEST(Launder, InvalidFractionIsUsageError) {
  LaunderSetup s(10);
  auto args = s.args(s.dir / "out");
  *(std::find(args.begin(), args.end(), "--fraction") + 1) = "1.5";
  EXPECT_EQ(cli(args).exit_code, 1);
  EXPECT_FALSE(fs::exists(s.dir / "out"));
}

TEST(Launder, CodecFailureIsPartial) {
  LaunderSetup s(10);
  const fs::path out = s.dir / "out";
  const ProcessResult r = cli(s.args(out), {"MOCK_CODEC_FAIL=1"});
  EXPECT_EQ(r.exit_code, 2) << r.stderr_text;
  EXPECT_EQ(value_of(r.stdout_text, "jobs_failed"), "1");
  EXPECT_EQ(value_of(r.stdout_text, "jobs_succeeded"), "8");
  EXPECT_EQ(line_count(out / "augmented_manifest.txt"), 18u);
  const std::string summary = protocol::read_text_file(out / "run_summary.txt");
  EXPECT_NE(summary.find("failure="), std::string::npos);
  EXPECT_EQ(protocol::read_text_file(out / "augmented_manifest.txt").find("recompression"),
            std::string::npos);
}

// --------------------------------------------------------------- evaluate

TEST(Evaluate, SeparableScores) {
  testing::TempDir dir;
  write_scored(dir.path(),
               {record("b0", Label::kBonafide, ""), record("b1", Label::kBonafide, ""),
                record("s0", Label::kSpoof, "A17"), record("s1", Label::kSpoof, "A18")},
               {5, 6, -5, -6});
  const std::vector<std::string> args = {"evaluate", "--manifest", (dir / "manifest.txt").string(),
                                         "--scores", (dir / "scores.txt").string()};
  const ProcessResult r = cli(args);
  ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
  EXPECT_EQ(value_of(r.stdout_text, "eer"), "0.000000");
  EXPECT_EQ(value_of(r.stdout_text, "min_dcf"), "0.000000");
  EXPECT_EQ(value_of(r.stdout_text, "act_dcf"), "0.000000");
  EXPECT_EQ(value_of(r.stdout_text, "n_bonafide"), "2");
  EXPECT_EQ(value_of(r.stdout_text, "n_spoof"), "2");

  auto inverted = args;
  inverted.push_back("--invert-scores");
  EXPECT_EQ(value_of(cli(inverted).stdout_text, "eer"), "100.000000");
}

TEST(Evaluate, NonFiniteScoreCitesLine) {
  testing::TempDir dir;
  write_scored(dir.path(),
               {record("b0", Label::kBonafide, ""), record("s0", Label::kSpoof, "A17")}, {1, 0});
  testing::write_text(dir / "scores.txt", "b0 1.0\ns0 0.5\nb1 nan\n");
  const ProcessResult r = cli({"evaluate", "--manifest", (dir / "manifest.txt").string(),
                               "--scores", (dir / "scores.txt").string()});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.stderr_text.find("line 3"), std::string::npos) << r.stderr_text;
}

TEST(Evaluate, JoinPolicies) {
  testing::TempDir dir;
  write_scored(dir.path(),
               {record("b0", Label::kBonafide, ""), record("s0", Label::kSpoof, "A17")}, {1, 0});
  testing::write_text(dir / "scores.txt", "b0 1.0\ns0 0.5\nzz 3\n");
  const std::vector<std::string> args = {"evaluate", "--manifest", (dir / "manifest.txt").string(),
                                         "--scores", (dir / "scores.txt").string()};
  EXPECT_EQ(cli(args).exit_code, 1);
  auto relaxed = args;
  relaxed.insert(relaxed.end(), {"--join", "intersect"});
  EXPECT_EQ(cli(relaxed).exit_code, 0);

  testing::write_text(dir / "scores.txt", "x 1.0\ny 0.5\n");
  const ProcessResult empty = cli(relaxed);
  EXPECT_EQ(empty.exit_code, 1);
  EXPECT_NE(empty.stderr_text.find("no trial"), std::string::npos);
}

TEST(Evaluate, GaussianScoresNearAnalyticEer) {
  testing::TempDir dir;
  const metrics::ScoreSet g = metrics::gaussian_scores(20000, 20000, 1, -1, 1, 77);
  std::vector<TrialRecord> trials;
  std::vector<double> scores;
  for (std::size_t i = 0; i < g.bonafide.size(); ++i) {
    trials.push_back(record("b" + std::to_string(i), Label::kBonafide, ""));
    scores.push_back(g.bonafide[i]);
  }
  for (std::size_t i = 0; i < g.spoof.size(); ++i) {
    trials.push_back(record("s" + std::to_string(i), Label::kSpoof, "A17"));
    scores.push_back(g.spoof[i]);
  }
  write_scored(dir.path(), trials, scores);
  const ProcessResult r = cli({"evaluate", "--manifest", (dir / "manifest.txt").string(),
                               "--scores", (dir / "scores.txt").string()});
  ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
  EXPECT_NEAR(std::stod(value_of(r.stdout_text, "eer")), 15.866, 1.0);
  EXPECT_NEAR(std::stod(value_of(r.stdout_text, "eer")), metrics::eer(g), 1e-6);
}

// ----------------------------------------------------------------- report

// Six attacks whose spoof scores creep toward the bonafide scores as the
// attack number grows, spread over three codecs.
void write_graded(const fs::path& dir) {
  std::vector<TrialRecord> trials;
  std::vector<double> scores;
  Rng rng(21);
  for (int c = 0; c < 3; ++c) {
    const std::string codec = "C0" + std::to_string(c);
    for (int i = 0; i < 40; ++i) {
      trials.push_back(record("b" + std::to_string(c) + "_" + std::to_string(i),
                              Label::kBonafide, "", codec));
      scores.push_back(1 + rng.gaussian());
    }
    for (int a = 0; a < 6; ++a) {
      for (int i = 0; i < 40; ++i) {
        trials.push_back(record("s" + std::to_string(c) + "_" + std::to_string(a) + "_" +
                                    std::to_string(i),
                                Label::kSpoof, "A" + std::to_string(17 + a), codec));
        scores.push_back(-2 + 0.7 * a + rng.gaussian());
      }
    }
  }
  write_scored(dir, trials, scores);
}

TEST(Report, WritesTablesAndRanksWorst) {
  testing::TempDir dir;
  write_graded(dir.path());
  const fs::path out = dir / "rep";
  const ProcessResult r =
      cli({"report", "--manifest", (dir / "manifest.txt").string(), "--scores",
           (dir / "scores.txt").string(), "--out", out.string(), "--prefix", "t"});
  ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
  EXPECT_EQ(value_of(r.stdout_text, "worst_attack_min_dcf"), "A22,A21,A20,A19,A18");
  EXPECT_EQ(value_of(r.stdout_text, "worst_attack_eer"), "A22,A21,A20,A19,A18");
  const std::string codecs = value_of(r.stdout_text, "worst_codec_cllr");
  EXPECT_EQ(std::count(codecs.begin(), codecs.end(), ','), 2);
  for (const char* f : {"t_pooled.tsv", "t_by_attack.tsv", "t_by_codec.tsv", "t_grid_min_dcf.tsv",
                        "t_grid_act_dcf.tsv", "t_grid_cllr.tsv", "t_grid_eer.tsv",
                        "t_skipped.txt"}) {
    EXPECT_TRUE(fs::is_regular_file(out / f)) << f;
  }
  EXPECT_EQ(line_count(out / "t_grid_eer.tsv"), 7u);
}

TEST(Report, LayoutAndFormatFlags) {
  testing::TempDir dir;
  write_graded(dir.path());
  const fs::path out = dir / "rep";
  const ProcessResult r = cli({"report", "--manifest", (dir / "manifest.txt").string(),
                               "--scores", (dir / "scores.txt").string(), "--out", out.string(),
                               "--layout", "pooled,codec", "--format", "markdown"});
  ASSERT_EQ(r.exit_code, 0) << r.stderr_text;
  EXPECT_TRUE(fs::is_regular_file(out / "report_pooled.md"));
  EXPECT_TRUE(fs::is_regular_file(out / "report_by_codec.md"));
  EXPECT_FALSE(fs::exists(out / "report_by_attack.md"));
  EXPECT_FALSE(fs::exists(out / "report_grid_eer.md"));
  EXPECT_EQ(value_of(r.stdout_text, "worst_attack_eer"), "<missing worst_attack_eer>");

  EXPECT_EQ(cli({"report", "--manifest", (dir / "manifest.txt").string(), "--scores",
                 (dir / "scores.txt").string(), "--out", out.string(), "--layout", "bogus"})
                .exit_code,
            1);
}

TEST(Report, EmptyJoinIsError) {
  testing::TempDir dir;
  write_graded(dir.path());
  testing::write_text(dir / "other.txt", "nobody 1.0\n");
  const ProcessResult r = cli({"report", "--manifest", (dir / "manifest.txt").string(),
                               "--scores", (dir / "other.txt").string(), "--out",
                               (dir / "rep").string(), "--join", "intersect"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_FALSE(fs::exists(dir / "rep"));
}

// ------------------------------------------------------------ misc commands

TEST(Selftest, AllChecksPass) {
  const ProcessResult r = cli({"selftest"});
  EXPECT_EQ(r.exit_code, 0) << r.stdout_text << r.stderr_text;
  EXPECT_EQ(r.stdout_text.find("FAIL"), std::string::npos);
  EXPECT_GE(std::count(r.stdout_text.begin(), r.stdout_text.end(), '\n'), 7);
}

TEST(NoiseCheck, ReportsAssets) {
  testing::TempDir dir;
  testing::write_noise_assets(dir.path());
  const ProcessResult ok = cli({"noise-check", "--noise-dir", dir.path().string()});
  ASSERT_EQ(ok.exit_code, 0) << ok.stderr_text;
  EXPECT_EQ(value_of(ok.stdout_text, "white"), "synthetic");
  EXPECT_EQ(value_of(ok.stdout_text, "babble").rfind("ok samples=48000", 0), 0u);

  fs::remove(dir / "volvo.wav");
  const ProcessResult missing = cli({"noise-check", "--noise-dir", dir.path().string()});
  EXPECT_EQ(missing.exit_code, 1);
  EXPECT_NE(missing.stderr_text.find("volvo"), std::string::npos);
}

TEST(Usage, BadInvocations) {
  EXPECT_EQ(cli({}).exit_code, 1);
  EXPECT_EQ(cli({"frobnicate"}).exit_code, 1);
  EXPECT_EQ(cli({"evaluate", "--audio-root", "/tmp"}).exit_code, 1);
  EXPECT_EQ(cli({"evaluate"}).exit_code, 1);
  EXPECT_EQ(cli({"--help"}).exit_code, 0);
  EXPECT_EQ(cli({"evaluate", "--manifest", "/nonexistent", "--scores", "/nonexistent"}).exit_code,
            1);
}

TEST(Run, InProcessEntryPoint) {
  std::ostringstream out;
  const char* argv[] = {"launderbench", "selftest", "--seed", "3"};
  EXPECT_EQ(run(4, argv, out), 0);
  EXPECT_EQ(out.str().rfind("PASS ", 0), 0u);
}

}  // namespace
}  // namespace lb::cli
