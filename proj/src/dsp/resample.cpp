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
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>

#include "launderbench/dsp.hpp"
#include "launderbench/error.hpp"

namespace lb::dsp {
namespace {

constexpr double kStopbandDb = 70.0;
constexpr double kCutoffFraction = 0.95;      // of the lower Nyquist
constexpr double kTransitionFraction = 0.10;  // of the lower Nyquist
constexpr std::int64_t kMaxTabulatedPhases = 4096;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

class KaiserSinc {
 public:
  KaiserSinc(int source_hz, int target_hz) {
    const double nyquist = std::min(source_hz, target_hz) / 2.0;
    cutoff_ = 2.0 * kCutoffFraction * nyquist / source_hz;
    beta_ = 0.1102 * (kStopbandDb - 8.7);
    const double transition = 2.0 * std::numbers::pi * kTransitionFraction * nyquist / source_hz;
    const double taps = (kStopbandDb - 8.0) / (2.285 * transition);
    half_width_ = std::max<std::int64_t>(2, static_cast<std::int64_t>(std::ceil(taps / 2.0)));
    i0_beta_ = std::cyl_bessel_i(0.0, beta_);
  }

  std::int64_t half_width() const { return half_width_; }

  // Taps for input offsets j = -half+1 .. half around an output that sits
  // `frac` input samples past its base index. Normalized to unit DC gain.
  void taps(double frac, double* out) const {
    double sum = 0.0;
    std::int64_t i = 0;
    for (std::int64_t j = -half_width_ + 1; j <= half_width_; ++j, ++i) {
      const double t = static_cast<double>(j) - frac;
      const double u = t / static_cast<double>(half_width_);
      double w = 0.0;
      if (std::abs(u) < 1.0) {
        w = std::cyl_bessel_i(0.0, beta_ * std::sqrt(1.0 - u * u)) / i0_beta_;
      }
      out[i] = cutoff_ * sinc(cutoff_ * t) * w;
      sum += out[i];
    }
    for (std::int64_t k = 0; k < i; ++k) out[k] /= sum;
  }

 private:
  double cutoff_;
  double beta_;
  double i0_beta_;
  std::int64_t half_width_;
};

// Point reflection about the end samples keeps value and slope continuous.
double extended(std::span<const double> x, std::int64_t idx) {
  const auto n = static_cast<std::int64_t>(x.size());
  if (idx >= 0 && idx < n) return x[static_cast<std::size_t>(idx)];
  if (idx < 0) {
    const std::int64_t m = std::min(-idx, n - 1);
    return 2.0 * x[0] - x[static_cast<std::size_t>(m)];
  }
  const std::int64_t m = std::max<std::int64_t>(2 * (n - 1) - idx, 0);
  return 2.0 * x[static_cast<std::size_t>(n - 1)] - x[static_cast<std::size_t>(m)];
}

}  // namespace

AudioBuffer resample(const AudioBuffer& x, int target_rate_hz) {
  if (target_rate_hz <= 0) {
    throw InvalidParameter("target rate must be positive, got " +
                           std::to_string(target_rate_hz));
  }
  const int source = x.sample_rate_hz();
  if (target_rate_hz == source) return x;

  const std::int64_t g = std::gcd(source, target_rate_hz);
  const std::int64_t up = target_rate_hz / g;   // L
  const std::int64_t down = source / g;         // M
  const auto n_in = static_cast<std::int64_t>(x.size());
  const std::int64_t n_out = (n_in * target_rate_hz + source / 2) / source;
  std::vector<double> y(static_cast<std::size_t>(n_out), 0.0);
  if (n_in == 0) return AudioBuffer(std::move(y), target_rate_hz);

  const KaiserSinc kernel(source, target_rate_hz);
  const std::int64_t half = kernel.half_width();
  const std::int64_t width = 2 * half;
  const std::span<const double> in = x.samples();

  std::vector<double> table;
  const bool tabulate = up <= kMaxTabulatedPhases;
  if (tabulate) {
    table.resize(static_cast<std::size_t>(up * width));
    for (std::int64_t p = 0; p < up; ++p) {
      kernel.taps(static_cast<double>(p) / static_cast<double>(up),
                  table.data() + p * width);
    }
  }
  std::vector<double> scratch(tabulate ? 0 : static_cast<std::size_t>(width));

  for (std::int64_t m = 0; m < n_out; ++m) {
    const std::int64_t pos = m * down;
    const std::int64_t base = pos / up;
    const std::int64_t phase = pos % up;
    const double* h;
    if (tabulate) {
      h = table.data() + phase * width;
    } else {
      kernel.taps(static_cast<double>(phase) / static_cast<double>(up), scratch.data());
      h = scratch.data();
    }
    const std::int64_t first = base - half + 1;
    double acc = 0.0;
    if (first >= 0 && first + width <= n_in) {
      const double* src = in.data() + first;
      for (std::int64_t k = 0; k < width; ++k) acc += h[k] * src[k];
    } else {
      for (std::int64_t k = 0; k < width; ++k) acc += h[k] * extended(in, first + k);
    }
    y[static_cast<std::size_t>(m)] = acc;
  }
  return AudioBuffer(std::move(y), target_rate_hz);
}

AudioBuffer launder_resample(const AudioBuffer& x, int target_rate_hz) {
  if (target_rate_hz == x.sample_rate_hz()) {
    if (target_rate_hz <= 0) throw InvalidParameter("target rate must be positive");
    return x;
  }
  std::vector<double> back =
      std::move(resample(resample(x, target_rate_hz), x.sample_rate_hz())).release_samples();
  back.resize(x.size(), 0.0);
  return AudioBuffer(std::move(back), x.sample_rate_hz());
}

}  // namespace lb::dsp
