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

#include "launderbench/protocol.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "launderbench/error.hpp"

namespace lb::protocol {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Splits one line into whitespace-separated tokens, stopping at a token that
// starts with '#'.
std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

// Calls fn(line_number, tokens) for every line that has tokens.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++line_no;
    const auto tokens = tokenize(line);
    if (!tokens.empty()) fn(line_no, tokens);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

TrialRecord native_record(std::size_t line_no, const std::vector<std::string_view>& f) {
  if (f.size() != 5) {
    throw MalformedLine(line_no, "expected 5 fields (utt label attack codec path), got " +
                                     std::to_string(f.size()));
  }
  TrialRecord r;
  r.utterance_id = std::string(f[0]);
  if (f[1] == "bonafide") {
    r.label = Label::kBonafide;
  } else if (f[1] == "spoof") {
    r.label = Label::kSpoof;
  } else {
    throw MalformedLine(line_no, "label must be 'bonafide' or 'spoof', got '" +
                                     std::string(f[1]) + "'");
  }
  r.attack_id = std::string(f[2]);
  r.codec_id = std::string(f[3]);
  r.source_path = std::string(f[4]);
  if (r.label == Label::kBonafide && r.attack_id != kNoAttack) {
    throw MalformedLine(line_no, "bonafide record must have attack '-', got '" +
                                     r.attack_id + "'");
  }
  if (r.label == Label::kSpoof && r.attack_id == kNoAttack) {
    throw MalformedLine(line_no, "spoof record must name an attack");
  }
  return r;
}

TrialRecord asvspoof5_record(std::size_t line_no, const std::vector<std::string_view>& f) {
  if (f.size() < 9) {
    throw MalformedLine(line_no, "expected at least 9 ASVspoof 5 metadata columns, got " +
                                     std::to_string(f.size()));
  }
  TrialRecord r;
  r.utterance_id = std::string(f[1]);
  const std::string_view key = f[8];
  if (key == "bonafide") {
    r.label = Label::kBonafide;
    r.attack_id = std::string(kNoAttack);
  } else if (key == "spoof") {
    r.label = Label::kSpoof;
    r.attack_id = std::string(f[7]);
    if (r.attack_id == kNoAttack) throw MalformedLine(line_no, "spoof row without attack");
  } else {
    throw MalformedLine(line_no, "KEY column must be bonafide or spoof");
  }
  r.codec_id = f[3] == "-" ? std::string(kUncodedCodec) : std::string(f[3]);
  r.source_path = std::string(f[1]) + ".flac";
  return r;
}

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::kBonafide ? "bonafide" : "spoof";
}

std::vector<TrialRecord> parse_manifest(std::string_view text, ManifestLayout layout) {
  std::vector<TrialRecord> records;
  std::unordered_map<std::string, std::size_t> first_seen;
  for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
    TrialRecord r = layout == ManifestLayout::kNative ? native_record(line_no, f)
                                                      : asvspoof5_record(line_no, f);
    auto [it, inserted] = first_seen.emplace(r.utterance_id, line_no);
    if (!inserted) {
      throw DuplicateId("line " + std::to_string(line_no) + ": utterance '" +
                        r.utterance_id + "' already defined on line " +
                        std::to_string(it->second));
    }
    records.push_back(std::move(r));
  });
  return records;
}

std::string emit_manifest_line(const TrialRecord& r) {
  std::string line;
  line.reserve(r.utterance_id.size() + r.source_path.size() + 32);
  line += r.utterance_id;
  line += ' ';
  line += to_string(r.label);
  line += ' ';
  line += r.attack_id;
  line += ' ';
  line += r.codec_id;
  line += ' ';
  line += r.source_path;
  line += '\n';
  return line;
}

std::string emit_manifest(std::span<const TrialRecord> records) {
  std::string out;
  for (const TrialRecord& r : records) out += emit_manifest_line(r);
  return out;
}

std::vector<ScoreRecord> parse_scores(std::string_view text) {
  std::vector<ScoreRecord> scores;
  for_each_line(text, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
    if (f.size() != 2) {
      throw MalformedLine(line_no, "expected 'utterance_id score', got " +
                                       std::to_string(f.size()) + " fields");
    }
    std::string_view num = f[1];
    if (!num.empty() && num.front() == '+') num.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), value);
    if (ec == std::errc::result_out_of_range) {
      throw NonFiniteScore(line_no, "score '" + std::string(f[1]) + "' is out of range");
    }
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw MalformedLine(line_no, "cannot parse score '" + std::string(f[1]) + "'");
    }
    if (!std::isfinite(value)) {
      throw NonFiniteScore(line_no, "score '" + std::string(f[1]) + "' is not finite");
    }
    scores.push_back({std::string(f[0]), value});
  });
  return scores;
}

std::string emit_scores(std::span<const ScoreRecord> scores) {
  std::string out;
  char buf[64];
  for (const ScoreRecord& s : scores) {
    const auto res = std::to_chars(buf, buf + sizeof buf, s.score);
    out += s.utterance_id;
    out += ' ';
    out.append(buf, res.ptr);
    out += '\n';
  }
  return out;
}

JoinResult join_scores(std::span<const TrialRecord> trials,
                       std::span<const ScoreRecord> scores, JoinPolicy policy) {
  std::unordered_map<std::string_view, std::size_t> by_id;
  by_id.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!by_id.emplace(scores[i].utterance_id, i).second) {
      throw DuplicateId("score file lists utterance '" + scores[i].utterance_id +
                        "' more than once");
    }
  }
  JoinResult result;
  result.scored.reserve(trials.size());
  std::vector<bool> used(scores.size(), false);
  std::vector<std::string> missing;
  for (const TrialRecord& t : trials) {
    const auto it = by_id.find(t.utterance_id);
    if (it == by_id.end()) {
      missing.push_back(t.utterance_id);
      continue;
    }
    used[it->second] = true;
    result.scored.push_back({t, scores[it->second].score});
  }
  std::vector<std::string> orphans;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!used[i]) orphans.push_back(scores[i].utterance_id);
  }
  if (policy == JoinPolicy::kStrict) {
    auto describe = [](const std::vector<std::string>& ids) {
      std::string s;
      for (std::size_t i = 0; i < ids.size() && i < 5; ++i) s += (i ? ", " : "") + ids[i];
      if (ids.size() > 5) s += ", ...";
      return s;
    };
    if (!missing.empty()) {
      throw MissingScore(std::to_string(missing.size()) + " trial(s) have no score: " +
                             describe(missing),
                         std::move(missing));
    }
    if (!orphans.empty()) {
      throw OrphanScore(std::to_string(orphans.size()) + " score(s) match no trial: " +
                            describe(orphans),
                        std::move(orphans));
    }
  }
  result.dropped_trials = missing.size();
  result.dropped_scores = orphans.size();
  return result;
}

ManifestStats manifest_stats(std::span<const TrialRecord> trials) {
  ManifestStats s;
  for (const TrialRecord& t : trials) {
    ++(t.label == Label::kBonafide ? s.bonafide : s.spoof);
  }
  s.total = s.bonafide + s.spoof;
  return s;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoFailure("cannot open " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoFailure("error reading " + path.string());
  return text;
}

}  // namespace lb::protocol
