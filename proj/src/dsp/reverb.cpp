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
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

#include "launderbench/dsp.hpp"
#include "launderbench/error.hpp"
#include "launderbench/rng.hpp"

namespace lb::dsp {
namespace {

// The FFTW planner is not reentrant; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
using FftwArray = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwArray<T> fftw_array(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return FftwArray<T>(p);
}

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {}
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

std::vector<double> convolve_truncated(std::span<const double> x,
                                       std::span<const double> h,
                                       std::size_t length) {
  std::vector<double> y(length, 0.0);
  const std::size_t nx = std::min(x.size(), length);
  if (nx == 0 || h.empty() || length == 0) return y;

  if (h.size() <= 32 || nx <= 32) {
    for (std::size_t n = 0; n < length; ++n) {
      double acc = 0.0;
      const std::size_t kmax = std::min(n, h.size() - 1);
      for (std::size_t k = 0; k <= kmax; ++k) {
        if (n - k < nx) acc += h[k] * x[n - k];
      }
      y[n] = acc;
    }
    return y;
  }

  const std::size_t hn = std::min(h.size(), length);
  const std::size_t n_fft = next_pow2(nx + hn - 1);
  const std::size_t n_bins = n_fft / 2 + 1;
  auto bx = fftw_array<double>(n_fft);
  auto bh = fftw_array<double>(n_fft);
  auto fx = fftw_array<fftw_complex>(n_bins);
  auto fh = fftw_array<fftw_complex>(n_bins);

  std::unique_ptr<Plan> px, ph, pinv;
  {
    std::lock_guard lock(planner_mutex());
    const int n = static_cast<int>(n_fft);
    px = std::make_unique<Plan>(
        fftw_plan_dft_r2c_1d(n, bx.get(), fx.get(), FFTW_ESTIMATE));
    ph = std::make_unique<Plan>(
        fftw_plan_dft_r2c_1d(n, bh.get(), fh.get(), FFTW_ESTIMATE));
    pinv = std::make_unique<Plan>(
        fftw_plan_dft_c2r_1d(n, fx.get(), bx.get(), FFTW_ESTIMATE));
  }
  // Planning with FFTW_ESTIMATE leaves the arrays alone, so fill afterwards.
  std::fill(bx.get(), bx.get() + n_fft, 0.0);
  std::fill(bh.get(), bh.get() + n_fft, 0.0);
  std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(nx), bx.get());
  std::copy(h.begin(), h.begin() + static_cast<std::ptrdiff_t>(hn), bh.get());
  px->execute();
  ph->execute();
  for (std::size_t k = 0; k < n_bins; ++k) {
    const double re = fx[k][0] * fh[k][0] - fx[k][1] * fh[k][1];
    const double im = fx[k][0] * fh[k][1] + fx[k][1] * fh[k][0];
    fx[k][0] = re;
    fx[k][1] = im;
  }
  pinv->execute();
  const double scale = 1.0 / static_cast<double>(n_fft);
  for (std::size_t n = 0; n < length && n < n_fft; ++n) y[n] = bx[n] * scale;
  return y;
}

double rir_envelope(double t_s, double rt60_s) {
  return std::exp(-t_s * 3.0 * std::numbers::ln10 / rt60_s);
}

AudioBuffer synthesize_rir(double rt60_s, int fs_hz, std::uint64_t seed) {
  if (!(rt60_s > 0.0) || !std::isfinite(rt60_s)) {
    throw InvalidParameter("RT60 must be positive, got " + std::to_string(rt60_s));
  }
  if (fs_hz <= 0) throw InvalidParameter("sample rate must be positive");
  // The epsilon keeps e.g. 1.5 * 0.6 * 16000 = 14399.999... at 14400.
  const auto length =
      static_cast<std::size_t>(std::ceil(1.5 * rt60_s * fs_hz - 1e-9));
  std::vector<double> h(std::max<std::size_t>(length, 1));
  h[0] = 1.0;
  Rng rng(seed);
  for (std::size_t n = 1; n < h.size(); ++n) {
    const double t = static_cast<double>(n) / fs_hz;
    h[n] = rng.gaussian() * rir_envelope(t, rt60_s);
  }
  return AudioBuffer(std::move(h), fs_hz);
}

AudioBuffer apply_reverberation(const AudioBuffer& x, double rt60_s, std::uint64_t seed) {
  const AudioBuffer rir = synthesize_rir(rt60_s, x.sample_rate_hz(), seed);
  std::vector<double> y = convolve_truncated(x.samples(), rir.samples(), x.size());

  double peak_in = 0.0;
  for (double s : x.samples()) peak_in = std::max(peak_in, std::abs(s));
  double peak_out = 0.0;
  for (double s : y) peak_out = std::max(peak_out, std::abs(s));
  if (peak_out > peak_in && peak_out > 0.0) {
    const double g = peak_in / peak_out;
    for (double& s : y) s *= g;
  }
  return AudioBuffer(std::move(y), x.sample_rate_hz());
}

}  // namespace lb::dsp
