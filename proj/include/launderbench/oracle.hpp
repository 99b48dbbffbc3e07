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

#include "launderbench/metrics.hpp"
#include "launderbench/rng.hpp"

// Reference implementations used to cross-check the production code. They
// favour directness over speed.
namespace lb::oracle {

// Enumerate every distinct pooled score plus +inf as a threshold and count
// directly; quadratic in the number of scores.
double brute_force_eer(const metrics::ScoreSet& s);
double brute_force_min_dcf(const metrics::ScoreSet& s, const metrics::MetricConfig& cfg);
double brute_force_act_dcf(const metrics::ScoreSet& s, const metrics::MetricConfig& cfg);

// Class sizes in [1, max_size]; roughly half the values come from a small
// integer grid so that ties within and across classes are common.
metrics::ScoreSet random_score_set(Rng& rng, std::size_t max_size = 50);

// Closed-form magnitude of a digital Butterworth lowpass obtained through
// the prewarped bilinear transform.
double butterworth_magnitude(int order, double cutoff_hz, double freq_hz, double rate_hz);

}  // namespace lb::oracle
