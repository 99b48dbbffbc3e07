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

#include <compare>
#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "launderbench/metrics.hpp"
#include "launderbench/protocol.hpp"

namespace lb::reporting {

// Wildcard meaning "pooled over this axis".
inline constexpr std::string_view kAny = "*";

struct GroupKey {
  std::string attack_id{kAny};
  std::string codec_id{kAny};

  auto operator<=>(const GroupKey&) const = default;
  bool operator==(const GroupKey&) const = default;
};

std::string to_string(const GroupKey& key);

using CellMetrics = metrics::MetricSummary;

struct SkippedCell {
  GroupKey key;
  std::size_t n_bonafide = 0;
  std::size_t n_spoof = 0;
};

struct BreakdownTable {
  std::map<GroupKey, CellMetrics> cells;
  metrics::MetricConfig config;
  std::vector<SkippedCell> skipped;
};

struct Axes {
  bool attack = true;
  bool codec = true;
  bool grid = true;  // (attack, codec) cells
};

// Always contains the pooled cell. With the attack axis, adds (a, *) per
// attack; with the codec axis, (*, c) per codec; with grid, every (a, c).
// Bonafide trials carry no attack, so every cell of a codec restriction
// shares that restriction's bonafide trials. Cells lacking either class are
// listed in `skipped`. Throws EmptyInput.
BreakdownTable compute_breakdown(std::span<const protocol::ScoredTrial> scored,
                                 const metrics::MetricConfig& cfg, Axes axes = {});

enum class Metric { kMinDcf, kActDcf, kCllr, kEer };
inline constexpr Metric kAllMetrics[] = {Metric::kMinDcf, Metric::kActDcf, Metric::kCllr,
                                         Metric::kEer};

std::string_view to_string(Metric metric);
Metric parse_metric(std::string_view text);
double metric_value(const CellMetrics& cell, Metric metric);

enum class Axis { kAttack, kCodec };
std::string_view to_string(Axis axis);

// The k cells of the axis (pooled over the other axis) with the largest
// value, descending; equal values keep lexicographic key order. Throws
// InsufficientCells when the axis has fewer than k cells.
std::vector<GroupKey> rank_worst(const BreakdownTable& table, Metric metric, std::size_t k,
                                 Axis axis);

// Number of cells rank_worst can draw from on an axis.
std::size_t axis_cell_count(const BreakdownTable& table, Axis axis);

enum class Layout { kPooled, kPerAttack, kPerCodec, kGrid };
enum class Format { kTsv, kCsv, kMarkdown };

Format parse_format(std::string_view text);
std::string_view file_extension(Format fmt);

// Orders ids with embedded numbers numerically ("A9" < "A17").
bool natural_less(std::string_view a, std::string_view b);

// `metric` selects the grid's cell value and is ignored by the other layouts.
// Values have three decimals; EER is in percent. Grid columns put the
// uncoded condition first.
std::string render(const BreakdownTable& table, Layout layout, Format fmt,
                   Metric metric = Metric::kMinDcf);

std::string render_skipped(const BreakdownTable& table);

// Writes <prefix>_pooled, _by_attack, _by_codec, _grid_<metric> (per metric)
// and <prefix>_skipped.txt into dir, according to which cells exist.
// Returns the written paths.
std::vector<std::filesystem::path> write_report(const BreakdownTable& table,
                                                const std::filesystem::path& dir,
                                                std::string_view prefix, Format fmt);

}  // namespace lb::reporting
