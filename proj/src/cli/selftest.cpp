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
#include <numbers>
#include <sstream>

#include "launderbench/cli.hpp"
#include "launderbench/dsp.hpp"
#include "launderbench/metrics.hpp"
#include "launderbench/oracle.hpp"
#include "launderbench/rng.hpp"

namespace lb::cli {
namespace {

std::string num(double v) {
  std::ostringstream s;
  s.precision(10);
  s << v;
  return s.str();
}

SelftestResult metric_oracle(std::uint64_t seed) {
  Rng rng(derive_seed(seed, {"selftest", "oracle"}));
  const metrics::MetricConfig cfg;
  for (int i = 0; i < 1000; ++i) {
    const metrics::ScoreSet s = oracle::random_score_set(rng);
    if (metrics::eer(s) != oracle::brute_force_eer(s) ||
        metrics::min_dcf(s, cfg) != oracle::brute_force_min_dcf(s, cfg) ||
        metrics::act_dcf(s, cfg) != oracle::brute_force_act_dcf(s, cfg)) {
      return {"metric_oracle", false, "mismatch on set " + std::to_string(i)};
    }
  }
  return {"metric_oracle", true, "1000 sets"};
}

SelftestResult hand_fixture() {
  const metrics::ScoreSet s{{1, 2, 4}, {0, 3}};
  const metrics::MetricConfig cfg;
  const double mn = metrics::min_dcf(s, cfg);
  const double act = metrics::act_dcf(s, cfg);
  const double e = metrics::eer(s);
  const bool ok = mn == 0.5 && act == 1.0 && std::abs(e - 125.0 / 3.0) < 1e-9;
  return {"dcf_fixture", ok, "min_dcf=" + num(mn) + " act_dcf=" + num(act) + " eer=" + num(e)};
}

SelftestResult gaussian_calibration(std::uint64_t seed) {
  const metrics::ScoreSet s = metrics::gaussian_scores(100000, 100000, 1.0, -1.0, 1.0, seed);
  const double e = metrics::eer(s);
  const double ref = metrics::analytic_gaussian_eer(1.0, -1.0, 1.0);
  return {"gaussian_eer", std::abs(e - ref) <= 0.5, "eer=" + num(e) + " analytic=" + num(ref)};
}

SelftestResult cllr_neutral() {
  const double c = metrics::cllr(metrics::ScoreSet{{0, 0, 0}, {0, 0}});
  return {"cllr_neutral", c == 1.0, "cllr=" + num(c)};
}

SelftestResult butterworth() {
  const double fs = 44100.0, fc = 8000.0;
  const dsp::FilterCoefficients f = dsp::design_butterworth_lowpass(5, fc, fs);
  double worst = 0.0;
  for (double freq = 0.0; freq < fs / 2; freq += 250.0) {
    worst = std::max(worst, std::abs(dsp::magnitude_response(f, freq, fs) -
                                     oracle::butterworth_magnitude(5, fc, freq, fs)));
  }
  const double at_cut = dsp::magnitude_response(f, fc, fs);
  const double at_dc = dsp::magnitude_response(f, 0.0, fs);
  const bool ok = std::abs(at_cut - std::numbers::sqrt2 / 2) <= 1e-6 &&
                  std::abs(at_dc - 1.0) <= 1e-9 && worst <= 1e-9;
  return {"butterworth", ok, "|H(fc)|=" + num(at_cut) + " max_dev=" + num(worst)};
}

SelftestResult rir_decay() {
  const double level = 20.0 * std::log10(dsp::rir_envelope(0.6, 0.6));
  return {"rir_decay", std::abs(level + 60.0) <= 1e-9, "level_db=" + num(level)};
}

SelftestResult resampler() {
  const int fs = 16000;
  std::vector<double> x(fs);
  for (int i = 0; i < fs; ++i) x[i] = 0.5 * std::sin(2 * std::numbers::pi * 1000.0 * i / fs);
  const audio::AudioBuffer in(x, fs);
  const audio::AudioBuffer y = dsp::resample(dsp::resample(in, 44100), fs);
  double sig = 0.0, err = 0.0;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    sig += x[i] * x[i];
    err += (x[i] - y[i]) * (x[i] - y[i]);
  }
  const double snr = 10.0 * std::log10(sig / err);
  return {"resample_roundtrip", snr >= 40.0, "snr_db=" + num(snr)};
}

}  // namespace

std::vector<SelftestResult> run_selftest(std::uint64_t seed) {
  return {metric_oracle(seed), hand_fixture(), gaussian_calibration(seed), cllr_neutral(),
          butterworth(), rir_decay(), resampler()};
}

}  // namespace lb::cli
