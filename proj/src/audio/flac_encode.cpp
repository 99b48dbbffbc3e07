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

#include <algorithm>
#include <array>
#include <cstdlib>
#include <limits>

#include <openssl/evp.h>

#include "bitstream.hpp"
#include "launderbench/audio.hpp"

namespace lb::audio {
namespace {

using detail::BitWriter;

constexpr unsigned kBlockSize = 4096;
constexpr unsigned kMaxPartitionOrder = 8;
constexpr unsigned kMaxRiceParam = 14;  // 15 is the escape code
constexpr unsigned kMaxFixedOrder = 4;

struct ResidualPlan {
  std::uint64_t bits = std::numeric_limits<std::uint64_t>::max();
  unsigned partition_order = 0;
  std::vector<unsigned> params;
};

std::uint64_t zigzag(std::int64_t v) {
  return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

// Exact Rice cost search. cost[k] for a partition is count*(k+1) + sum(u>>k),
// which is additive over partitions, so sums at the finest order are merged
// pairwise to evaluate coarser orders.
ResidualPlan plan_residual(const std::vector<std::int64_t>& residual,
                           unsigned block_size, unsigned order) {
  unsigned max_order = 0;
  while (max_order < kMaxPartitionOrder &&
         (block_size % (2u << max_order)) == 0 &&
         (block_size >> (max_order + 1)) > order) {
    ++max_order;
  }

  const unsigned finest = 1u << max_order;
  using Costs = std::array<std::uint64_t, kMaxRiceParam + 1>;
  std::vector<Costs> sums(finest, Costs{});
  std::vector<std::uint64_t> counts(finest, 0);
  const unsigned part_len = block_size >> max_order;
  std::size_t idx = 0;
  for (unsigned p = 0; p < finest; ++p) {
    const unsigned count = part_len - (p == 0 ? order : 0);
    counts[p] = count;
    for (unsigned i = 0; i < count; ++i, ++idx) {
      const std::uint64_t u = zigzag(residual[idx]);
      for (unsigned k = 0; k <= kMaxRiceParam; ++k) sums[p][k] += u >> k;
    }
  }

  ResidualPlan best;
  for (int po = static_cast<int>(max_order); po >= 0; --po) {
    const unsigned parts = 1u << po;
    std::uint64_t total = 2 + 4;  // method + partition order
    std::vector<unsigned> params(parts);
    for (unsigned p = 0; p < parts; ++p) {
      std::uint64_t best_cost = std::numeric_limits<std::uint64_t>::max();
      for (unsigned k = 0; k <= kMaxRiceParam; ++k) {
        const std::uint64_t cost = counts[p] * (k + 1) + sums[p][k];
        if (cost < best_cost) {
          best_cost = cost;
          params[p] = k;
        }
      }
      total += 4 + best_cost;
    }
    if (total < best.bits) {
      best.bits = total;
      best.partition_order = static_cast<unsigned>(po);
      best.params = std::move(params);
    }
    if (po == 0) break;
    // Merge neighbouring partitions for the next coarser order.
    for (unsigned p = 0; p < parts / 2; ++p) {
      for (unsigned k = 0; k <= kMaxRiceParam; ++k) {
        sums[p][k] = sums[2 * p][k] + sums[2 * p + 1][k];
      }
      counts[p] = counts[2 * p] + counts[2 * p + 1];
    }
  }
  return best;
}

void fixed_residual(std::span<const std::int16_t> x, unsigned order,
                    std::vector<std::int64_t>& out) {
  out.clear();
  for (std::size_t i = order; i < x.size(); ++i) {
    const std::int64_t s0 = x[i];
    std::int64_t pred = 0;
    switch (order) {
      case 0: pred = 0; break;
      case 1: pred = x[i - 1]; break;
      case 2: pred = 2 * std::int64_t{x[i - 1]} - x[i - 2]; break;
      case 3:
        pred = 3 * std::int64_t{x[i - 1]} - 3 * std::int64_t{x[i - 2]} + x[i - 3];
        break;
      case 4:
        pred = 4 * std::int64_t{x[i - 1]} - 6 * std::int64_t{x[i - 2]} +
               4 * std::int64_t{x[i - 3]} - x[i - 4];
        break;
    }
    out.push_back(s0 - pred);
  }
}

void write_utf8_number(BitWriter& w, std::uint64_t v) {
  if (v < 0x80) {
    w.write_bits(v, 8);
    return;
  }
  int extra = 1;
  while (extra < 6 && v >= (std::uint64_t{1} << (5 * extra + 6))) ++extra;
  const unsigned lead_bits = 6 - extra;  // payload bits in the first byte
  const std::uint64_t prefix = (0xFF00u >> (extra + 1)) & 0xFF;
  w.write_bits(prefix | ((v >> (6 * extra)) & ((1u << lead_bits) - 1)), 8);
  for (int i = extra - 1; i >= 0; --i) {
    w.write_bits(0x80 | ((v >> (6 * i)) & 0x3F), 8);
  }
}

unsigned sample_rate_code(int rate) {
  switch (rate) {
    case 8000: return 4;
    case 16000: return 5;
    case 22050: return 6;
    case 24000: return 7;
    case 32000: return 8;
    case 44100: return 9;
    case 48000: return 10;
    case 96000: return 11;
    default: return 0;  // take it from STREAMINFO
  }
}

void encode_subframe(BitWriter& w, std::span<const std::int16_t> x) {
  const unsigned n = static_cast<unsigned>(x.size());
  if (std::all_of(x.begin(), x.end(), [&](std::int16_t v) { return v == x[0]; })) {
    w.write_bits(0, 1);
    w.write_bits(0, 6);  // CONSTANT
    w.write_bits(0, 1);
    w.write_signed(x[0], 16);
    return;
  }

  const std::uint64_t verbatim_bits = std::uint64_t{16} * n;
  std::uint64_t best_bits = verbatim_bits;
  int best_order = -1;
  ResidualPlan best_plan;
  std::vector<std::int64_t> residual;
  for (unsigned order = 0; order <= kMaxFixedOrder && order < n; ++order) {
    fixed_residual(x, order, residual);
    ResidualPlan plan = plan_residual(residual, n, order);
    const std::uint64_t bits = std::uint64_t{16} * order + plan.bits;
    if (bits < best_bits) {
      best_bits = bits;
      best_order = static_cast<int>(order);
      best_plan = std::move(plan);
    }
  }

  w.write_bits(0, 1);
  if (best_order < 0) {
    w.write_bits(1, 6);  // VERBATIM
    w.write_bits(0, 1);
    for (std::int16_t v : x) w.write_signed(v, 16);
    return;
  }
  const auto order = static_cast<unsigned>(best_order);
  w.write_bits(8 + order, 6);  // FIXED
  w.write_bits(0, 1);
  for (unsigned i = 0; i < order; ++i) w.write_signed(x[i], 16);
  fixed_residual(x, order, residual);
  w.write_bits(0, 2);  // Rice, 4-bit parameters
  w.write_bits(best_plan.partition_order, 4);
  const unsigned part_len = n >> best_plan.partition_order;
  std::size_t idx = 0;
  for (unsigned p = 0; p < best_plan.params.size(); ++p) {
    const unsigned param = best_plan.params[p];
    w.write_bits(param, 4);
    const unsigned count = part_len - (p == 0 ? order : 0);
    for (unsigned i = 0; i < count; ++i) w.write_rice(residual[idx++], param);
  }
}

std::vector<std::uint8_t> encode_frame(std::span<const std::int16_t> block,
                                       std::uint64_t frame_number,
                                       int sample_rate_hz) {
  BitWriter w;
  const unsigned n = static_cast<unsigned>(block.size());
  w.write_bits(0x7FFC, 15);
  w.write_bits(0, 1);  // fixed block size stream
  const bool nominal = n == kBlockSize;
  w.write_bits(nominal ? 12 : 7, 4);
  const unsigned sr_code = sample_rate_code(sample_rate_hz);
  w.write_bits(sr_code, 4);
  w.write_bits(0, 4);  // mono
  w.write_bits(4, 3);  // 16 bits per sample
  w.write_bits(0, 1);
  write_utf8_number(w, frame_number);
  if (!nominal) w.write_bits(n - 1, 16);
  const std::uint8_t hcrc = detail::crc8(w.bytes());
  w.write_bits(hcrc, 8);
  encode_subframe(w, block);
  w.align_to_byte();
  const std::uint16_t fcrc = detail::crc16(w.bytes());
  w.write_bits(fcrc, 16);
  return std::move(w.bytes());
}

}  // namespace

std::vector<std::uint8_t> encode_flac16(std::span<const std::int16_t> pcm,
                                        int sample_rate_hz) {
  std::vector<std::vector<std::uint8_t>> frames;
  std::uint32_t min_frame = 0;
  std::uint32_t max_frame = 0;
  for (std::size_t start = 0, f = 0; start < pcm.size(); start += kBlockSize, ++f) {
    const std::size_t len = std::min<std::size_t>(kBlockSize, pcm.size() - start);
    frames.push_back(encode_frame(pcm.subspan(start, len), f, sample_rate_hz));
    const auto size = static_cast<std::uint32_t>(frames.back().size());
    min_frame = f == 0 ? size : std::min(min_frame, size);
    max_frame = std::max(max_frame, size);
  }

  std::array<std::uint8_t, 16> md5{};
  {
    std::vector<std::uint8_t> raw;
    raw.reserve(pcm.size() * 2);
    for (std::int16_t v : pcm) {
      const auto u = static_cast<std::uint16_t>(v);
      raw.push_back(static_cast<std::uint8_t>(u & 0xFF));
      raw.push_back(static_cast<std::uint8_t>(u >> 8));
    }
    unsigned len = 0;
    EVP_Digest(raw.data(), raw.size(), md5.data(), &len, EVP_md5(), nullptr);
  }

  BitWriter w;
  for (char c : {'f', 'L', 'a', 'C'}) w.write_bits(static_cast<std::uint8_t>(c), 8);
  w.write_bits(1, 1);  // last metadata block
  w.write_bits(0, 7);  // STREAMINFO
  w.write_bits(34, 24);
  const unsigned nominal_block = static_cast<unsigned>(
      std::clamp<std::size_t>(pcm.size(), 16, kBlockSize));
  w.write_bits(nominal_block, 16);
  w.write_bits(nominal_block, 16);
  w.write_bits(min_frame, 24);
  w.write_bits(max_frame, 24);
  w.write_bits(static_cast<std::uint64_t>(sample_rate_hz), 20);
  w.write_bits(0, 3);   // channels - 1
  w.write_bits(15, 5);  // bits per sample - 1
  w.write_bits(pcm.size(), 36);
  for (std::uint8_t b : md5) w.write_bits(b, 8);

  std::vector<std::uint8_t> out = std::move(w.bytes());
  for (const auto& frame : frames) out.insert(out.end(), frame.begin(), frame.end());
  return out;
}

}  // namespace lb::audio
