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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "launderbench/audio.hpp"

namespace lb::dsp {

using audio::AudioBuffer;

// ---------------------------------------------------------------------------
// Reverberation

// Statistical room impulse response: h[0] = 1 (direct path) followed by a
// seeded Gaussian tail under the envelope exp(-t * 3 ln(10) / rt60), so the
// envelope is exactly -60 dB at t = rt60. Length is ceil(1.5 * rt60 * fs).
// Throws InvalidParameter for non-positive rt60 or fs.
AudioBuffer synthesize_rir(double rt60_s, int fs_hz, std::uint64_t seed);

// Amplitude of the RIR tail envelope at time t (seconds); 1 at t = 0.
double rir_envelope(double t_s, double rt60_s);

// Full linear convolution of x with synthesize_rir(rt60, x.rate, seed),
// truncated to len(x). If the result peaks above the input peak it is
// rescaled to the input peak.
AudioBuffer apply_reverberation(const AudioBuffer& x, double rt60_s,
                                std::uint64_t seed);

// Linear convolution truncated to the first `length` samples (FFT based).
std::vector<double> convolve_truncated(std::span<const double> x,
                                       std::span<const double> h,
                                       std::size_t length);

// ---------------------------------------------------------------------------
// Additive noise

// n i.i.d. standard normal samples. Throws InvalidParameter when n == 0.
std::vector<double> generate_white_noise(std::size_t n, std::uint64_t seed);

struct NoiseMixInfo {
  std::size_t offset = 0;  // start of the noise segment
  double gain = 0.0;       // applied to the segment
  double signal_power = 0.0;
  double segment_power = 0.0;

  // 10 log10(Px / (g^2 Pseg)), i.e. the SNR actually constructed.
  double achieved_snr_db() const;
};

// y = x + g * segment, where segment is `noise` read cyclically from a seeded
// offset and g = sqrt(Px / (Pseg * 10^(snr/10))).
// Throws RateMismatch or SilentInput.
AudioBuffer mix_noise(const AudioBuffer& x, const AudioBuffer& noise,
                      double snr_db, std::uint64_t seed,
                      NoiseMixInfo* info = nullptr);

// ---------------------------------------------------------------------------
// IIR filtering

struct Biquad {
  double b0 = 1, b1 = 0, b2 = 0;
  double a1 = 0, a2 = 0;  // a0 == 1
};

struct FilterCoefficients {
  std::vector<Biquad> sections;
  double gain = 1.0;
};

// Digital Butterworth lowpass: analog prototype, bilinear transform with
// prewarping at the cutoff. A cutoff at or above Nyquist is clamped to
// 0.99 * fs/2 with a warning. `effective_cutoff_hz` receives the cutoff
// actually designed. Throws InvalidParameter.
FilterCoefficients design_butterworth_lowpass(int order, double cutoff_hz,
                                              double fs_hz,
                                              double* effective_cutoff_hz = nullptr);

// |H(e^{jw})| at frequency f (Hz).
double magnitude_response(const FilterCoefficients& c, double f_hz, double fs_hz);

// True when every section's poles lie strictly inside the unit circle.
bool is_stable(const FilterCoefficients& c);

// Cascade of sections in direct form II transposed, zero initial state.
// Throws UnstableFilter.
AudioBuffer apply_filter(const AudioBuffer& x, const FilterCoefficients& c);

// ---------------------------------------------------------------------------
// Resampling

// Kaiser-windowed sinc, rational-ratio polyphase resampler. Output length is
// round(len * target / source). The anti-alias cutoff sits at 0.95 of the
// lower Nyquist with a transition band of 10% of it and >= 70 dB stopband.
// Signal edges are extended by point reflection. Throws InvalidParameter.
AudioBuffer resample(const AudioBuffer& x, int target_rate_hz);

// Resample to target then back to x's rate; the result has x's length.
AudioBuffer launder_resample(const AudioBuffer& x, int target_rate_hz);

}  // namespace lb::dsp
