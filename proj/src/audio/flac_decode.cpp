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
#include <cstring>
#include <string>

#include <openssl/evp.h>

#include "bitstream.hpp"

namespace lb::audio::detail {
namespace {

constexpr std::array<std::uint8_t, 256> make_crc8_table() {
  std::array<std::uint8_t, 256> t{};
  for (unsigned i = 0; i < 256; ++i) {
    unsigned c = i;
    for (int b = 0; b < 8; ++b) c = (c & 0x80) ? ((c << 1) ^ 0x07) : (c << 1);
    t[i] = static_cast<std::uint8_t>(c);
  }
  return t;
}

constexpr std::array<std::uint16_t, 256> make_crc16_table() {
  std::array<std::uint16_t, 256> t{};
  for (unsigned i = 0; i < 256; ++i) {
    unsigned c = i << 8;
    for (int b = 0; b < 8; ++b) c = (c & 0x8000) ? ((c << 1) ^ 0x8005) : (c << 1);
    t[i] = static_cast<std::uint16_t>(c);
  }
  return t;
}

constexpr auto kCrc8 = make_crc8_table();
constexpr auto kCrc16 = make_crc16_table();

struct StreamInfo {
  unsigned min_block = 0;
  unsigned max_block = 0;
  unsigned sample_rate = 0;
  unsigned channels = 0;
  unsigned bits_per_sample = 0;
  std::uint64_t total_samples = 0;
  std::array<std::uint8_t, 16> md5{};
};

StreamInfo parse_streaminfo(BitReader& r) {
  StreamInfo si;
  si.min_block = r.read_bits(16);
  si.max_block = r.read_bits(16);
  r.read_bits(24);  // min frame size
  r.read_bits(24);  // max frame size
  si.sample_rate = r.read_bits(20);
  si.channels = r.read_bits(3) + 1;
  si.bits_per_sample = r.read_bits(5) + 1;
  si.total_samples = (std::uint64_t{r.read_bits(4)} << 32) | r.read_bits(32);
  for (auto& b : si.md5) b = static_cast<std::uint8_t>(r.read_bits(8));
  return si;
}

std::uint64_t read_utf8_number(BitReader& r) {
  const std::uint32_t first = r.read_bits(8);
  if ((first & 0x80) == 0) return first;
  int extra = 0;
  std::uint64_t value = 0;
  if ((first & 0xE0) == 0xC0) {
    extra = 1;
    value = first & 0x1F;
  } else if ((first & 0xF0) == 0xE0) {
    extra = 2;
    value = first & 0x0F;
  } else if ((first & 0xF8) == 0xF0) {
    extra = 3;
    value = first & 0x07;
  } else if ((first & 0xFC) == 0xF8) {
    extra = 4;
    value = first & 0x03;
  } else if ((first & 0xFE) == 0xFC) {
    extra = 5;
    value = first & 0x01;
  } else if (first == 0xFE) {
    extra = 6;
  } else {
    throw CorruptFile("FLAC: invalid frame number encoding");
  }
  for (int i = 0; i < extra; ++i) {
    const std::uint32_t b = r.read_bits(8);
    if ((b & 0xC0) != 0x80) throw CorruptFile("FLAC: invalid frame number encoding");
    value = (value << 6) | (b & 0x3F);
  }
  return value;
}

void decode_residual(BitReader& r, unsigned block_size, unsigned order,
                     std::int64_t* out) {
  const unsigned method = r.read_bits(2);
  if (method > 1) throw CorruptFile("FLAC: reserved residual coding method");
  const unsigned param_bits = method == 0 ? 4 : 5;
  const unsigned escape = method == 0 ? 15 : 31;
  const unsigned partition_order = r.read_bits(4);
  const unsigned partitions = 1u << partition_order;
  if ((block_size >> partition_order) << partition_order != block_size ||
      (block_size >> partition_order) < order) {
    throw CorruptFile("FLAC: invalid residual partition order");
  }
  std::size_t i = 0;
  for (unsigned p = 0; p < partitions; ++p) {
    const unsigned count =
        (block_size >> partition_order) - (p == 0 ? order : 0);
    const unsigned param = r.read_bits(param_bits);
    if (param == escape) {
      const unsigned raw_bits = r.read_bits(5);
      for (unsigned k = 0; k < count; ++k) out[i++] = r.read_signed(raw_bits);
    } else {
      for (unsigned k = 0; k < count; ++k) out[i++] = r.read_rice(param);
    }
  }
}

void decode_subframe(BitReader& r, unsigned block_size, unsigned bps,
                     std::int64_t* out) {
  if (r.read_bits(1) != 0) throw CorruptFile("FLAC: subframe padding bit set");
  const unsigned type = r.read_bits(6);
  unsigned wasted = 0;
  if (r.read_bits(1) == 1) wasted = r.read_unary() + 1;
  if (wasted >= bps) throw CorruptFile("FLAC: invalid wasted bits");
  const unsigned eff_bps = bps - wasted;

  if (type == 0) {
    const std::int64_t v = r.read_signed(eff_bps);
    for (unsigned i = 0; i < block_size; ++i) out[i] = v;
  } else if (type == 1) {
    for (unsigned i = 0; i < block_size; ++i) out[i] = r.read_signed(eff_bps);
  } else if (type >= 8 && type <= 12) {
    const unsigned order = type - 8;
    if (order > block_size) throw CorruptFile("FLAC: predictor order exceeds block");
    for (unsigned i = 0; i < order; ++i) out[i] = r.read_signed(eff_bps);
    decode_residual(r, block_size, order, out + order);
    for (unsigned i = order; i < block_size; ++i) {
      switch (order) {
        case 0: break;
        case 1: out[i] += out[i - 1]; break;
        case 2: out[i] += 2 * out[i - 1] - out[i - 2]; break;
        case 3: out[i] += 3 * out[i - 1] - 3 * out[i - 2] + out[i - 3]; break;
        case 4:
          out[i] += 4 * out[i - 1] - 6 * out[i - 2] + 4 * out[i - 3] - out[i - 4];
          break;
      }
    }
  } else if (type >= 32) {
    const unsigned order = (type & 31) + 1;
    if (order > block_size) throw CorruptFile("FLAC: predictor order exceeds block");
    for (unsigned i = 0; i < order; ++i) out[i] = r.read_signed(eff_bps);
    const unsigned precision = r.read_bits(4) + 1;
    if (precision == 16) throw CorruptFile("FLAC: invalid LPC precision");
    const std::int64_t shift = r.read_signed(5);
    if (shift < 0) throw CorruptFile("FLAC: negative LPC shift");
    std::array<std::int64_t, 32> coefs{};
    for (unsigned j = 0; j < order; ++j) coefs[j] = r.read_signed(precision);
    decode_residual(r, block_size, order, out + order);
    for (unsigned i = order; i < block_size; ++i) {
      std::int64_t acc = 0;
      for (unsigned j = 0; j < order; ++j) acc += coefs[j] * out[i - j - 1];
      out[i] += acc >> shift;
    }
  } else {
    throw CorruptFile("FLAC: reserved subframe type " + std::to_string(type));
  }
  if (wasted > 0) {
    for (unsigned i = 0; i < block_size; ++i) out[i] <<= wasted;
  }
}

unsigned block_size_from_code(unsigned code, BitReader& r) {
  if (code == 0) throw CorruptFile("FLAC: reserved block size");
  if (code == 1) return 192;
  if (code <= 5) return 576u << (code - 2);
  if (code == 6) return r.read_bits(8) + 1;
  if (code == 7) return r.read_bits(16) + 1;
  return 256u << (code - 8);
}

unsigned sample_rate_from_code(unsigned code, BitReader& r, unsigned fallback) {
  static constexpr unsigned kRates[12] = {0,     88200, 176400, 192000,
                                          8000,  16000, 22050,  24000,
                                          32000, 44100, 48000,  96000};
  if (code == 0) return fallback;
  if (code < 12) return kRates[code];
  if (code == 12) return r.read_bits(8) * 1000;
  if (code == 13) return r.read_bits(16);
  if (code == 14) return r.read_bits(16) * 10;
  throw CorruptFile("FLAC: invalid sample rate code");
}

unsigned bps_from_code(unsigned code, unsigned fallback) {
  switch (code) {
    case 0: return fallback;
    case 1: return 8;
    case 2: return 12;
    case 4: return 16;
    case 5: return 20;
    case 6: return 24;
    case 7: return 32;
    default: throw CorruptFile("FLAC: reserved sample size");
  }
}

void check_md5(const FlacStream& s, const StreamInfo& si) {
  const bool unset = std::all_of(si.md5.begin(), si.md5.end(),
                                 [](std::uint8_t b) { return b == 0; });
  if (unset) return;
  const unsigned bytes_per_sample = (si.bits_per_sample + 7) / 8;
  std::vector<std::uint8_t> raw;
  raw.reserve(s.samples.size() * bytes_per_sample);
  for (std::int32_t v : s.samples) {
    const auto u = static_cast<std::uint32_t>(v);
    for (unsigned b = 0; b < bytes_per_sample; ++b) {
      raw.push_back(static_cast<std::uint8_t>(u >> (8 * b)));
    }
  }
  std::array<std::uint8_t, 16> digest{};
  unsigned len = 0;
  EVP_Digest(raw.data(), raw.size(), digest.data(), &len, EVP_md5(), nullptr);
  if (digest != si.md5) throw CorruptFile("FLAC: MD5 signature mismatch");
}

}  // namespace

std::uint8_t crc8(std::span<const std::uint8_t> data) {
  std::uint8_t c = 0;
  for (std::uint8_t b : data) c = kCrc8[c ^ b];
  return c;
}

std::uint16_t crc16(std::span<const std::uint8_t> data) {
  std::uint16_t c = 0;
  for (std::uint8_t b : data) {
    c = static_cast<std::uint16_t>((c << 8) ^ kCrc16[(c >> 8) ^ b]);
  }
  return c;
}

FlacStream decode_flac(std::span<const std::uint8_t> bytes) {
  std::size_t start = 0;
  // Skip an ID3v2 tag if one precedes the stream marker.
  if (bytes.size() >= 10 && std::memcmp(bytes.data(), "ID3", 3) == 0) {
    const std::size_t tag_size = (std::size_t{bytes[6]} << 21) |
                                 (std::size_t{bytes[7]} << 14) |
                                 (std::size_t{bytes[8]} << 7) | bytes[9];
    start = 10 + tag_size;
  }
  if (bytes.size() < start + 4 ||
      std::memcmp(bytes.data() + start, "fLaC", 4) != 0) {
    throw UnsupportedFormat("not a FLAC stream");
  }
  BitReader r(bytes.subspan(start + 4));

  StreamInfo si;
  bool have_streaminfo = false;
  for (bool last = false; !last;) {
    last = r.read_bits(1) == 1;
    const unsigned type = r.read_bits(7);
    const unsigned length = r.read_bits(24);
    if (type == 0) {
      if (length != 34) throw CorruptFile("FLAC: bad STREAMINFO length");
      si = parse_streaminfo(r);
      have_streaminfo = true;
    } else if (type == 127) {
      throw CorruptFile("FLAC: invalid metadata block type");
    } else {
      r.skip_bytes(length);
    }
  }
  if (!have_streaminfo) throw CorruptFile("FLAC: missing STREAMINFO");
  if (si.channels != 1) {
    throw MultichannelInput("FLAC stream has " + std::to_string(si.channels) +
                            " channels; only mono is supported");
  }
  if (si.sample_rate == 0) throw CorruptFile("FLAC: zero sample rate");

  FlacStream out;
  out.sample_rate_hz = static_cast<int>(si.sample_rate);
  out.bits_per_sample = static_cast<int>(si.bits_per_sample);
  if (si.total_samples > 0) out.samples.reserve(si.total_samples);

  std::vector<std::int64_t> block;
  const std::span<const std::uint8_t> frames = bytes.subspan(start + 4);
  while (r.bits_left() >= 16) {
    // Trailing tags after the last frame are ignored.
    if (si.total_samples != 0 && out.samples.size() >= si.total_samples) break;
    const std::size_t frame_start = r.byte_position();
    const std::uint32_t sync = r.read_bits(15);
    if (sync != 0x7FFC) throw CorruptFile("FLAC: lost frame sync");
    r.read_bits(1);  // blocking strategy
    const unsigned bs_code = r.read_bits(4);
    const unsigned sr_code = r.read_bits(4);
    const unsigned channel_code = r.read_bits(4);
    const unsigned ss_code = r.read_bits(3);
    if (r.read_bits(1) != 0) throw CorruptFile("FLAC: reserved header bit set");
    read_utf8_number(r);
    const unsigned block_size = block_size_from_code(bs_code, r);
    sample_rate_from_code(sr_code, r, si.sample_rate);
    const unsigned bps = bps_from_code(ss_code, si.bits_per_sample);
    const std::size_t header_end = r.byte_position();
    const std::uint8_t header_crc = static_cast<std::uint8_t>(r.read_bits(8));
    if (crc8(frames.subspan(frame_start, header_end - frame_start)) != header_crc) {
      throw CorruptFile("FLAC: frame header CRC mismatch");
    }
    if (channel_code != 0) {
      throw MultichannelInput("FLAC frame is not mono");
    }
    if (bps != si.bits_per_sample) {
      throw CorruptFile("FLAC: frame sample size differs from STREAMINFO");
    }

    block.assign(block_size, 0);
    decode_subframe(r, block_size, bps, block.data());
    r.align_to_byte();
    const std::size_t frame_end = r.byte_position();
    const std::uint16_t frame_crc = static_cast<std::uint16_t>(r.read_bits(16));
    if (crc16(frames.subspan(frame_start, frame_end - frame_start)) != frame_crc) {
      throw CorruptFile("FLAC: frame CRC mismatch");
    }
    for (std::int64_t v : block) out.samples.push_back(static_cast<std::int32_t>(v));
  }
  if (si.total_samples != 0 && out.samples.size() != si.total_samples) {
    throw CorruptFile("FLAC: sample count differs from STREAMINFO");
  }
  check_md5(out, si);
  return out;
}

}  // namespace lb::audio::detail
