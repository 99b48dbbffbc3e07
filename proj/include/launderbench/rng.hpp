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
#include <initializer_list>
#include <random>
#include <string_view>

namespace lb {

// 64-bit FNV-1a. Stable across platforms, unlike std::hash.
std::uint64_t hash_string(std::string_view text);

// One round of the splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Derives an independent stream seed from a base seed and a list of labels,
// e.g. derive_seed(seed, {"plan", utterance_id, "reverberation"}).
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::string_view> labels);

// Seeded generator with platform-independent transforms. The std::
// distributions are implementation-defined, so uniform/integer/Gaussian draws
// are computed here directly from the mt19937_64 bit stream.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  // Uniform integer on [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Standard normal via Box-Muller (one value per call).
  double gaussian();

 private:
  std::mt19937_64 engine_;
};

}  // namespace lb
