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
#include <vector>

namespace lb::metrics {

// Costs and spoof prior for the detection cost function. Defaults are the
// challenge countermeasure constants.
struct MetricConfig {
  double c_miss = 1.0;
  double c_fa = 10.0;
  double pi_spoof = 0.05;

  // min(c_miss * (1 - pi), c_fa * pi); the cost of the better trivial system.
  double normalizer() const;

  // Throws InvalidParameter unless costs are >= 0, pi in (0, 1) and the
  // normalizer is positive.
  void validate() const;
};

struct ScoreSet {
  std::vector<double> bonafide;
  std::vector<double> spoof;
};

// Operating point. p_miss counts bonafide < threshold, p_fa counts
// spoof >= threshold.
struct DetPoint {
  double threshold = 0.0;
  double p_miss = 0.0;
  double p_fa = 0.0;
  std::size_t n_miss = 0;
  std::size_t n_fa = 0;
};

// Thresholds are -inf, the midpoints between consecutive distinct pooled
// scores, and +inf, in increasing order. Throws EmptyClass.
std::vector<DetPoint> det_points(const ScoreSet& s);

// Equal error rate in percent: the DET point minimizing |p_miss - p_fa|
// (compared exactly in integer arithmetic; ties go to the smaller threshold),
// reported as the mean of the two rates.
double eer(const ScoreSet& s);

// Normalized DCF at one operating point:
// (c_miss (1 - pi) p_miss + c_fa pi p_fa) / normalizer.
double normalized_dcf(std::size_t n_miss, std::size_t n_bonafide, std::size_t n_fa,
                      std::size_t n_spoof, const MetricConfig& cfg);

double min_dcf(const ScoreSet& s, const MetricConfig& cfg);

// ln(c_fa pi / (c_miss (1 - pi))); scores >= the threshold are accepted as
// bonafide.
double bayes_threshold(const MetricConfig& cfg);

double act_dcf(const ScoreSet& s, const MetricConfig& cfg);

// Cost of log-likelihood ratios in bits, scores taken as natural-log LLRs.
double cllr(const ScoreSet& s);

struct MetricSummary {
  double min_dcf = 0.0;
  double act_dcf = 0.0;
  double cllr = 0.0;
  double eer = 0.0;
  std::size_t n_bonafide = 0;
  std::size_t n_spoof = 0;
};

// All four metrics from a single sort of the scores.
MetricSummary evaluate(const ScoreSet& s, const MetricConfig& cfg);

// Equal-variance Gaussian score model. Throws InvalidParameter.
ScoreSet gaussian_scores(std::size_t n_bonafide, std::size_t n_spoof, double mu_bonafide,
                         double mu_spoof, double sigma, std::uint64_t seed);

// 100 * Phi(-(mu_bonafide - mu_spoof) / (2 sigma)).
double analytic_gaussian_eer(double mu_bonafide, double mu_spoof, double sigma);

}  // namespace lb::metrics
