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

#include <cmath>
#include <string>

#include "launderbench/dsp.hpp"
#include "launderbench/error.hpp"
#include "launderbench/rng.hpp"

namespace lb::dsp {

std::vector<double> generate_white_noise(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw InvalidParameter("white noise length must be positive");
  Rng rng(seed);
  std::vector<double> out(n);
  for (double& v : out) v = rng.gaussian();
  return out;
}

double NoiseMixInfo::achieved_snr_db() const {
  return 10.0 * std::log10(signal_power / (gain * gain * segment_power));
}

AudioBuffer mix_noise(const AudioBuffer& x, const AudioBuffer& noise, double snr_db,
                      std::uint64_t seed, NoiseMixInfo* info) {
  if (noise.sample_rate_hz() != x.sample_rate_hz()) {
    throw RateMismatch("noise rate " + std::to_string(noise.sample_rate_hz()) +
                       " Hz differs from signal rate " +
                       std::to_string(x.sample_rate_hz()) + " Hz");
  }
  if (x.empty() || noise.empty()) throw SilentInput("empty signal or noise");
  const double px = rms_power(x);
  if (!(px > 0.0)) throw SilentInput("signal has zero power");
  if (!(rms_power(noise) > 0.0)) throw SilentInput("noise has zero power");

  Rng rng(seed);
  const std::size_t offset = rng.below(noise.size());
  std::vector<double> segment(x.size());
  for (std::size_t i = 0, j = offset; i < x.size(); ++i) {
    segment[i] = noise[j];
    if (++j == noise.size()) j = 0;
  }
  const double pseg = audio::rms_power(std::span<const double>(segment));
  if (!(pseg > 0.0)) throw SilentInput("selected noise segment has zero power");

  const double gain = std::sqrt(px / (pseg * std::pow(10.0, snr_db / 10.0)));
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + gain * segment[i];

  if (info != nullptr) {
    info->offset = offset;
    info->gain = gain;
    info->signal_power = px;
    info->segment_power = pseg;
  }
  return AudioBuffer(std::move(y), x.sample_rate_hz());
}

}  // namespace lb::dsp
