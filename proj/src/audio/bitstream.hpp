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

// MSB-first bit reader/writer and the CRCs used by FLAC framing.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "launderbench/error.hpp"

namespace lb::audio::detail {

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::size_t bit_position() const { return pos_; }
  std::size_t byte_position() const { return pos_ >> 3; }
  bool byte_aligned() const { return (pos_ & 7) == 0; }
  std::size_t bits_left() const { return data_.size() * 8 - pos_; }

  // n in [0, 32].
  std::uint32_t read_bits(unsigned n) {
    if (n == 0) return 0;
    if (bits_left() < n) throw CorruptFile("FLAC: unexpected end of stream");
    std::uint64_t v = 0;
    unsigned remaining = n;
    while (remaining > 0) {
      const std::size_t byte = pos_ >> 3;
      const unsigned offset = pos_ & 7;
      const unsigned avail = 8 - offset;
      const unsigned take = remaining < avail ? remaining : avail;
      const unsigned shift = avail - take;
      const std::uint32_t bits = (data_[byte] >> shift) & ((1u << take) - 1);
      v = (v << take) | bits;
      pos_ += take;
      remaining -= take;
    }
    return static_cast<std::uint32_t>(v);
  }

  std::int64_t read_signed(unsigned n) {
    if (n == 0) return 0;
    const std::uint64_t u = read_bits(n);
    const std::uint64_t sign = std::uint64_t{1} << (n - 1);
    return static_cast<std::int64_t>((u ^ sign)) - static_cast<std::int64_t>(sign);
  }

  // Number of 0 bits before the next 1 bit (which is consumed).
  std::uint32_t read_unary() {
    std::uint32_t zeros = 0;
    for (;;) {
      if (bits_left() == 0) throw CorruptFile("FLAC: unexpected end of stream");
      const std::size_t byte = pos_ >> 3;
      const unsigned offset = pos_ & 7;
      const std::uint8_t window =
          static_cast<std::uint8_t>(data_[byte] << offset);
      if (window == 0) {
        zeros += 8 - offset;
        pos_ += 8 - offset;
        continue;
      }
      const unsigned lead = std::countl_zero(window);
      zeros += lead;
      pos_ += lead + 1;
      return zeros;
    }
  }

  std::int64_t read_rice(unsigned param) {
    const std::uint64_t q = read_unary();
    const std::uint64_t u = (q << param) | read_bits(param);
    return static_cast<std::int64_t>(u >> 1) ^ -static_cast<std::int64_t>(u & 1);
  }

  void align_to_byte() { pos_ = (pos_ + 7) & ~std::size_t{7}; }

  void skip_bytes(std::size_t n) {
    if (!byte_aligned() || bits_left() < n * 8) {
      throw CorruptFile("FLAC: truncated block");
    }
    pos_ += n * 8;
  }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

class BitWriter {
 public:
  // n in [0, 64].
  void write_bits(std::uint64_t value, unsigned n) {
    for (unsigned i = n; i > 0; --i) push_bit((value >> (i - 1)) & 1u);
  }

  void write_signed(std::int64_t value, unsigned n) {
    write_bits(static_cast<std::uint64_t>(value), n);
  }

  void write_unary(std::uint64_t zeros) {
    for (std::uint64_t i = 0; i < zeros; ++i) push_bit(0);
    push_bit(1);
  }

  void write_rice(std::int64_t value, unsigned param) {
    const std::uint64_t u = (static_cast<std::uint64_t>(value) << 1) ^
                            static_cast<std::uint64_t>(value >> 63);
    write_unary(u >> param);
    write_bits(u & ((std::uint64_t{1} << param) - 1), param);
  }

  void align_to_byte() {
    while (fill_ != 0) push_bit(0);
  }

  std::vector<std::uint8_t>& bytes() { return bytes_; }

 private:
  void push_bit(unsigned bit) {
    current_ = static_cast<std::uint8_t>((current_ << 1) | bit);
    if (++fill_ == 8) {
      bytes_.push_back(current_);
      current_ = 0;
      fill_ = 0;
    }
  }

  std::vector<std::uint8_t> bytes_;
  std::uint8_t current_ = 0;
  unsigned fill_ = 0;
};

// CRC-8, polynomial x^8 + x^2 + x + 1, init 0.
std::uint8_t crc8(std::span<const std::uint8_t> data);
// CRC-16, polynomial x^16 + x^15 + x^2 + 1, init 0.
std::uint16_t crc16(std::span<const std::uint8_t> data);

struct FlacStream {
  std::vector<std::int32_t> samples;
  int sample_rate_hz = 0;
  int bits_per_sample = 0;
};

FlacStream decode_flac(std::span<const std::uint8_t> bytes);

}  // namespace lb::audio::detail
