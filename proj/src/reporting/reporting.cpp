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

#include "launderbench/reporting.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>

#include "launderbench/error.hpp"

namespace lb::reporting {
namespace fs = std::filesystem;
using protocol::Label;

namespace {

struct Bucket {
  std::vector<double> bonafide;
  std::vector<double> spoof;
};

void append(std::vector<double>& dst, const std::vector<double>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

void add_cell(BreakdownTable& table, GroupKey key, metrics::ScoreSet set) {
  if (set.bonafide.empty() || set.spoof.empty()) {
    table.skipped.push_back({std::move(key), set.bonafide.size(), set.spoof.size()});
    return;
  }
  table.cells.emplace(std::move(key), metrics::evaluate(set, table.config));
}

std::string fmt3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

using Row = std::vector<std::string>;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_rows(const Row& header, const std::vector<Row>& rows, Format fmt) {
  std::string out;
  auto emit = [&](const Row& row) {
    switch (fmt) {
      case Format::kTsv:
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i) out += '\t';
          out += row[i];
        }
        break;
      case Format::kCsv:
        for (std::size_t i = 0; i < row.size(); ++i) {
          if (i) out += ',';
          out += csv_field(row[i]);
        }
        break;
      case Format::kMarkdown:
        out += '|';
        for (const std::string& cell : row) {
          std::string escaped;
          for (char c : cell) {
            if (c == '|') escaped += '\\';
            escaped += c;
          }
          out += ' ' + escaped + " |";
        }
        break;
    }
    out += '\n';
  };
  emit(header);
  if (fmt == Format::kMarkdown) {
    out += '|';
    for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
    out += '\n';
  }
  for (const Row& row : rows) emit(row);
  return out;
}

Row metric_row(const GroupKey& key, const CellMetrics& m) {
  return {key.attack_id,   key.codec_id,  fmt3(m.min_dcf),
          fmt3(m.act_dcf), fmt3(m.cllr),  fmt3(m.eer),
          std::to_string(m.n_bonafide), std::to_string(m.n_spoof)};
}

const Row kMetricHeader = {"attack", "codec", "min_dcf", "act_dcf",
                           "cllr",   "eer",   "n_bonafide", "n_spoof"};

bool natural_key_less(const std::string& a, const std::string& b) {
  if (natural_less(a, b)) return true;
  if (natural_less(b, a)) return false;
  return a < b;
}

std::vector<std::string> codec_columns(const BreakdownTable& table) {
  std::set<std::string> ids;
  for (const auto& [key, cell] : table.cells) {
    if (key.attack_id != kAny && key.codec_id != kAny) ids.insert(key.codec_id);
  }
  for (const SkippedCell& s : table.skipped) {
    if (s.key.attack_id != kAny && s.key.codec_id != kAny) ids.insert(s.key.codec_id);
  }
  std::vector<std::string> cols(ids.begin(), ids.end());
  std::sort(cols.begin(), cols.end(), [](const std::string& a, const std::string& b) {
    const bool ua = a == protocol::kUncodedCodec;
    const bool ub = b == protocol::kUncodedCodec;
    if (ua != ub) return ua;
    return natural_key_less(a, b);
  });
  return cols;
}

std::vector<std::string> attack_rows(const BreakdownTable& table) {
  std::set<std::string> ids;
  for (const auto& [key, cell] : table.cells) {
    if (key.attack_id != kAny && key.codec_id != kAny) ids.insert(key.attack_id);
  }
  for (const SkippedCell& s : table.skipped) {
    if (s.key.attack_id != kAny && s.key.codec_id != kAny) ids.insert(s.key.attack_id);
  }
  std::vector<std::string> rows(ids.begin(), ids.end());
  std::sort(rows.begin(), rows.end(), natural_key_less);
  return rows;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoFailure("cannot open " + path.string() + " for writing");
  f << text;
  if (!f.flush()) throw IoFailure("failed writing " + path.string());
}

}  // namespace

std::string to_string(const GroupKey& key) { return "(" + key.attack_id + ", " + key.codec_id + ")"; }

BreakdownTable compute_breakdown(std::span<const protocol::ScoredTrial> scored,
                                 const metrics::MetricConfig& cfg, Axes axes) {
  if (scored.empty()) throw EmptyInput("no scored trials to break down");
  cfg.validate();

  // Bucket by (attack, codec); bonafide trials land under attack "-".
  std::map<std::pair<std::string, std::string>, Bucket> buckets;
  std::set<std::string> attacks, codecs;
  for (const protocol::ScoredTrial& st : scored) {
    Bucket& b = buckets[{st.trial.attack_id, st.trial.codec_id}];
    codecs.insert(st.trial.codec_id);
    if (st.trial.label == Label::kBonafide) {
      b.bonafide.push_back(st.score);
    } else {
      b.spoof.push_back(st.score);
      attacks.insert(st.trial.attack_id);
    }
  }

  BreakdownTable table;
  table.config = cfg;

  std::map<std::string, std::vector<double>> bonafide_by_codec;
  metrics::ScoreSet pooled;
  for (const auto& [ac, b] : buckets) {
    append(bonafide_by_codec[ac.second], b.bonafide);
    append(pooled.bonafide, b.bonafide);
    append(pooled.spoof, b.spoof);
  }
  add_cell(table, GroupKey{}, pooled);

  if (axes.attack) {
    for (const std::string& a : attacks) {
      metrics::ScoreSet set;
      set.bonafide = pooled.bonafide;
      for (const std::string& c : codecs) {
        auto it = buckets.find({a, c});
        if (it != buckets.end()) append(set.spoof, it->second.spoof);
      }
      add_cell(table, GroupKey{a, std::string(kAny)}, std::move(set));
    }
  }
  if (axes.codec) {
    for (const std::string& c : codecs) {
      metrics::ScoreSet set;
      set.bonafide = bonafide_by_codec[c];
      for (const std::string& a : attacks) {
        auto it = buckets.find({a, c});
        if (it != buckets.end()) append(set.spoof, it->second.spoof);
      }
      add_cell(table, GroupKey{std::string(kAny), c}, std::move(set));
    }
  }
  if (axes.grid) {
    for (const std::string& a : attacks) {
      for (const std::string& c : codecs) {
        metrics::ScoreSet set;
        set.bonafide = bonafide_by_codec[c];
        auto it = buckets.find({a, c});
        if (it != buckets.end()) set.spoof = it->second.spoof;
        add_cell(table, GroupKey{a, c}, std::move(set));
      }
    }
  }
  return table;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::kMinDcf: return "min_dcf";
    case Metric::kActDcf: return "act_dcf";
    case Metric::kCllr: return "cllr";
    case Metric::kEer: return "eer";
  }
  return "?";
}

Metric parse_metric(std::string_view text) {
  for (Metric m : kAllMetrics) {
    if (to_string(m) == text) return m;
  }
  throw InvalidParameter("unknown metric '" + std::string(text) + "'");
}

double metric_value(const CellMetrics& cell, Metric metric) {
  switch (metric) {
    case Metric::kMinDcf: return cell.min_dcf;
    case Metric::kActDcf: return cell.act_dcf;
    case Metric::kCllr: return cell.cllr;
    case Metric::kEer: return cell.eer;
  }
  return 0.0;
}

std::string_view to_string(Axis axis) { return axis == Axis::kAttack ? "attack" : "codec"; }

namespace {

bool on_axis(const GroupKey& key, Axis axis) {
  if (axis == Axis::kAttack) return key.attack_id != kAny && key.codec_id == kAny;
  return key.codec_id != kAny && key.attack_id == kAny;
}

}  // namespace

std::size_t axis_cell_count(const BreakdownTable& table, Axis axis) {
  std::size_t n = 0;
  for (const auto& [key, cell] : table.cells) n += on_axis(key, axis) ? 1 : 0;
  return n;
}

std::vector<GroupKey> rank_worst(const BreakdownTable& table, Metric metric, std::size_t k,
                                 Axis axis) {
  std::vector<std::pair<GroupKey, double>> candidates;
  for (const auto& [key, cell] : table.cells) {
    if (on_axis(key, axis)) candidates.emplace_back(key, metric_value(cell, metric));
  }
  if (candidates.size() < k) {
    throw InsufficientCells("requested worst " + std::to_string(k) + " " +
                            std::string(to_string(axis)) + " cells but only " +
                            std::to_string(candidates.size()) + " exist");
  }
  // The map already yields lexicographic key order; a stable sort keeps it
  // among equal values.
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<GroupKey> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(candidates[i].first);
  return out;
}

Format parse_format(std::string_view text) {
  if (text == "tsv") return Format::kTsv;
  if (text == "csv") return Format::kCsv;
  if (text == "markdown" || text == "md") return Format::kMarkdown;
  throw InvalidParameter("unknown table format '" + std::string(text) + "'");
}

std::string_view file_extension(Format fmt) {
  switch (fmt) {
    case Format::kTsv: return "tsv";
    case Format::kCsv: return "csv";
    case Format::kMarkdown: return "md";
  }
  return "txt";
}

bool natural_less(std::string_view a, std::string_view b) {
  std::size_t i = 0, j = 0;
  auto digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      std::string_view na = a.substr(i, ie - i), nb = b.substr(j, je - j);
      while (na.size() > 1 && na.front() == '0') na.remove_prefix(1);
      while (nb.size() > 1 && nb.front() == '0') nb.remove_prefix(1);
      if (na.size() != nb.size()) return na.size() < nb.size();
      if (na != nb) return na < nb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

std::string render(const BreakdownTable& table, Layout layout, Format fmt, Metric metric) {
  if (layout == Layout::kGrid) {
    const std::vector<std::string> cols = codec_columns(table);
    const std::vector<std::string> rows = attack_rows(table);
    Row header = {"attack"};
    header.insert(header.end(), cols.begin(), cols.end());
    std::vector<Row> body;
    for (const std::string& a : rows) {
      Row row = {a};
      for (const std::string& c : cols) {
        auto it = table.cells.find(GroupKey{a, c});
        row.push_back(it == table.cells.end() ? "-" : fmt3(metric_value(it->second, metric)));
      }
      body.push_back(std::move(row));
    }
    return format_rows(header, body, fmt);
  }

  std::vector<std::pair<GroupKey, const CellMetrics*>> selected;
  for (const auto& [key, cell] : table.cells) {
    const bool keep = (layout == Layout::kPooled && key.attack_id == kAny && key.codec_id == kAny) ||
                      (layout == Layout::kPerAttack && on_axis(key, Axis::kAttack)) ||
                      (layout == Layout::kPerCodec && on_axis(key, Axis::kCodec));
    if (keep) selected.emplace_back(key, &cell);
  }
  std::sort(selected.begin(), selected.end(), [](const auto& x, const auto& y) {
    const std::string& a = x.first.attack_id == kAny ? x.first.codec_id : x.first.attack_id;
    const std::string& b = y.first.attack_id == kAny ? y.first.codec_id : y.first.attack_id;
    return natural_key_less(a, b);
  });
  std::vector<Row> body;
  for (const auto& [key, cell] : selected) body.push_back(metric_row(key, *cell));
  return format_rows(kMetricHeader, body, fmt);
}

std::string render_skipped(const BreakdownTable& table) {
  std::string out = "attack\tcodec\tn_bonafide\tn_spoof\n";
  for (const SkippedCell& s : table.skipped) {
    out += s.key.attack_id + '\t' + s.key.codec_id + '\t' + std::to_string(s.n_bonafide) + '\t' +
           std::to_string(s.n_spoof) + '\n';
  }
  return out;
}

std::vector<fs::path> write_report(const BreakdownTable& table, const fs::path& dir,
                                   std::string_view prefix, Format fmt) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoFailure("cannot create report directory " + dir.string() + ": " + ec.message());

  const std::string ext(file_extension(fmt));
  const std::string base(prefix);
  std::vector<fs::path> written;
  auto put = [&](const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    write_file(p, text);
    written.push_back(p);
  };

  bool any_attack = false, any_codec = false, any_grid = false;
  for (const auto& [key, cell] : table.cells) {
    any_attack |= on_axis(key, Axis::kAttack);
    any_codec |= on_axis(key, Axis::kCodec);
    any_grid |= key.attack_id != kAny && key.codec_id != kAny;
  }

  put(base + "_pooled." + ext, render(table, Layout::kPooled, fmt));
  if (any_attack) put(base + "_by_attack." + ext, render(table, Layout::kPerAttack, fmt));
  if (any_codec) put(base + "_by_codec." + ext, render(table, Layout::kPerCodec, fmt));
  if (any_grid) {
    for (Metric m : kAllMetrics) {
      put(base + "_grid_" + std::string(to_string(m)) + "." + ext,
          render(table, Layout::kGrid, fmt, m));
    }
  }
  put(base + "_skipped.txt", render_skipped(table));
  return written;
}

}  // namespace lb::reporting
