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
#include <complex>
#include <mutex>
#include <numbers>
#include <set>
#include <utility>
#include <sstream>
#include <string>

#include "launderbench/dsp.hpp"
#include "launderbench/error.hpp"
#include "launderbench/log.hpp"

namespace lb::dsp {
namespace {

// Batch runs design the same clamped filter thousands of times; warn once per
// (cutoff, rate) pair.
bool first_clamp_warning(double cutoff_hz, double fs_hz) {
  static std::mutex mu;
  static std::set<std::pair<double, double>> seen;
  std::lock_guard lock(mu);
  return seen.emplace(cutoff_hz, fs_hz).second;
}

}  // namespace

FilterCoefficients design_butterworth_lowpass(int order, double cutoff_hz, double fs_hz,
                                              double* effective_cutoff_hz) {
  if (order < 1 || order > 64) {
    throw InvalidParameter("Butterworth order must be in [1, 64], got " +
                           std::to_string(order));
  }
  if (!(fs_hz > 0.0) || !std::isfinite(fs_hz)) {
    throw InvalidParameter("sample rate must be positive");
  }
  if (!(cutoff_hz > 0.0) || !std::isfinite(cutoff_hz)) {
    throw InvalidParameter("cutoff must be positive");
  }
  double fc = cutoff_hz;
  if (fc >= fs_hz / 2.0) {
    fc = 0.99 * fs_hz / 2.0;
    if (first_clamp_warning(cutoff_hz, fs_hz)) {
      std::ostringstream msg;
      msg << "lowpass cutoff " << cutoff_hz << " Hz is at or above Nyquist for fs="
          << fs_hz << " Hz; clamped to " << fc << " Hz";
      log_warning(msg.str());
    }
  }
  if (effective_cutoff_hz != nullptr) *effective_cutoff_hz = fc;

  // Prewarped cutoff of the analog prototype, in units where the bilinear
  // transform is s = (z - 1) / (z + 1).
  const double k = std::tan(std::numbers::pi * fc / fs_hz);
  const double n = order;

  FilterCoefficients c;
  c.gain = 1.0;
  for (int i = 0; i < order / 2; ++i) {
    const std::complex<double> p =
        k * std::polar(1.0, std::numbers::pi * (2.0 * i + n + 1.0) / (2.0 * n));
    const std::complex<double> z = (1.0 + p) / (1.0 - p);
    Biquad s;
    s.b0 = 1.0;
    s.b1 = 2.0;
    s.b2 = 1.0;
    s.a1 = -2.0 * z.real();
    s.a2 = std::norm(z);
    c.gain *= (1.0 + s.a1 + s.a2) / 4.0;
    c.sections.push_back(s);
  }
  if (order % 2 == 1) {
    const double z = (1.0 - k) / (1.0 + k);
    Biquad s;
    s.b0 = 1.0;
    s.b1 = 1.0;
    s.b2 = 0.0;
    s.a1 = -z;
    s.a2 = 0.0;
    c.gain *= (1.0 + s.a1) / 2.0;
    c.sections.push_back(s);
  }
  return c;
}

double magnitude_response(const FilterCoefficients& c, double f_hz, double fs_hz) {
  const std::complex<double> z1 =
      std::polar(1.0, -2.0 * std::numbers::pi * f_hz / fs_hz);  // z^-1
  std::complex<double> h = c.gain;
  for (const Biquad& s : c.sections) {
    const std::complex<double> num = s.b0 + z1 * (s.b1 + z1 * s.b2);
    const std::complex<double> den = 1.0 + z1 * (s.a1 + z1 * s.a2);
    h *= num / den;
  }
  return std::abs(h);
}

bool is_stable(const FilterCoefficients& c) {
  for (const Biquad& s : c.sections) {
    // Stability triangle for z^2 + a1 z + a2.
    if (!(std::abs(s.a2) < 1.0 && std::abs(s.a1) < 1.0 + s.a2)) return false;
  }
  return true;
}

AudioBuffer apply_filter(const AudioBuffer& x, const FilterCoefficients& c) {
  if (!is_stable(c)) throw UnstableFilter("filter has poles on or outside the unit circle");
  std::vector<double> y(x.samples().begin(), x.samples().end());
  for (double& v : y) v *= c.gain;
  for (const Biquad& s : c.sections) {
    double s1 = 0.0, s2 = 0.0;
    for (double& v : y) {
      const double in = v;
      const double out = s.b0 * in + s1;
      s1 = s.b1 * in - s.a1 * out + s2;
      s2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
  return AudioBuffer(std::move(y), x.sample_rate_hz());
}

}  // namespace lb::dsp
