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

#include "launderbench/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace lb::oracle {
namespace {

struct Counts {
  std::size_t miss = 0;
  std::size_t fa = 0;
};

Counts count_at(const metrics::ScoreSet& s, double tau) {
  Counts c;
  for (double b : s.bonafide) c.miss += b < tau ? 1 : 0;
  for (double v : s.spoof) c.fa += v >= tau ? 1 : 0;
  return c;
}

std::vector<double> thresholds(const metrics::ScoreSet& s) {
  std::vector<double> t(s.bonafide);
  t.insert(t.end(), s.spoof.begin(), s.spoof.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  t.push_back(std::numeric_limits<double>::infinity());
  return t;
}

double cost(const Counts& c, const metrics::ScoreSet& s, const metrics::MetricConfig& cfg) {
  const double p_miss = static_cast<double>(c.miss) / static_cast<double>(s.bonafide.size());
  const double p_fa = static_cast<double>(c.fa) / static_cast<double>(s.spoof.size());
  const double norm = std::min(cfg.c_miss * (1.0 - cfg.pi_spoof), cfg.c_fa * cfg.pi_spoof);
  return (cfg.c_miss * (1.0 - cfg.pi_spoof) * p_miss + cfg.c_fa * cfg.pi_spoof * p_fa) / norm;
}

}  // namespace

double brute_force_eer(const metrics::ScoreSet& s) {
  const auto nb = static_cast<long long>(s.bonafide.size());
  const auto ns = static_cast<long long>(s.spoof.size());
  long long best = std::numeric_limits<long long>::max();
  Counts chosen;
  for (double tau : thresholds(s)) {
    const Counts c = count_at(s, tau);
    const long long gap = std::llabs(static_cast<long long>(c.miss) * ns -
                                     static_cast<long long>(c.fa) * nb);
    if (gap < best) {
      best = gap;
      chosen = c;
    }
  }
  const double p_miss = static_cast<double>(chosen.miss) / static_cast<double>(nb);
  const double p_fa = static_cast<double>(chosen.fa) / static_cast<double>(ns);
  return 100.0 * (p_miss + p_fa) / 2.0;
}

double brute_force_min_dcf(const metrics::ScoreSet& s, const metrics::MetricConfig& cfg) {
  double best = std::numeric_limits<double>::infinity();
  for (double tau : thresholds(s)) best = std::min(best, cost(count_at(s, tau), s, cfg));
  return best;
}

double brute_force_act_dcf(const metrics::ScoreSet& s, const metrics::MetricConfig& cfg) {
  const double tau = std::log(cfg.c_fa * cfg.pi_spoof / (cfg.c_miss * (1.0 - cfg.pi_spoof)));
  return cost(count_at(s, tau), s, cfg);
}

metrics::ScoreSet random_score_set(Rng& rng, std::size_t max_size) {
  auto draw = [&]() {
    if (rng.below(2) == 0) return static_cast<double>(static_cast<int>(rng.below(11)) - 5);
    return 3.0 * rng.gaussian();
  };
  metrics::ScoreSet s;
  s.bonafide.resize(1 + rng.below(max_size));
  s.spoof.resize(1 + rng.below(max_size));
  for (double& v : s.bonafide) v = draw() + 0.5 * static_cast<double>(rng.below(3));
  for (double& v : s.spoof) v = draw();
  return s;
}

double butterworth_magnitude(int order, double cutoff_hz, double freq_hz, double rate_hz) {
  const double ratio = std::tan(std::numbers::pi * freq_hz / rate_hz) /
                       std::tan(std::numbers::pi * cutoff_hz / rate_hz);
  return 1.0 / std::sqrt(1.0 + std::pow(ratio, 2.0 * order));
}

}  // namespace lb::oracle
