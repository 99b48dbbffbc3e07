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

#include "launderbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "launderbench/error.hpp"
#include "launderbench/rng.hpp"

namespace lb::metrics {
namespace {

void require_both_classes(const ScoreSet& s) {
  if (s.bonafide.empty() || s.spoof.empty()) {
    throw EmptyClass("metric needs both bonafide and spoof scores (got " +
                     std::to_string(s.bonafide.size()) + " bonafide, " +
                     std::to_string(s.spoof.size()) + " spoof)");
  }
}

struct Sorted {
  std::vector<double> bonafide;
  std::vector<double> spoof;
};

Sorted sorted_copy(const ScoreSet& s) {
  Sorted out{s.bonafide, s.spoof};
  std::sort(out.bonafide.begin(), out.bonafide.end());
  std::sort(out.spoof.begin(), out.spoof.end());
  return out;
}

// Strictly between a and b when representable; otherwise b, which induces
// the same partition (b < b is false, b >= b is true).
double threshold_between(double a, double b) {
  const double m = std::midpoint(a, b);
  return m > a ? m : b;
}

std::vector<DetPoint> sweep(const Sorted& s) {
  const std::size_t nb = s.bonafide.size();
  const std::size_t ns = s.spoof.size();
  std::vector<DetPoint> points;
  points.reserve(nb + ns + 1);

  auto make = [&](double tau, std::size_t n_miss, std::size_t n_fa) {
    DetPoint p;
    p.threshold = tau;
    p.n_miss = n_miss;
    p.n_fa = n_fa;
    p.p_miss = static_cast<double>(n_miss) / static_cast<double>(nb);
    p.p_fa = static_cast<double>(n_fa) / static_cast<double>(ns);
    return p;
  };

  points.push_back(make(-std::numeric_limits<double>::infinity(), 0, ns));
  std::size_t ib = 0, is = 0;
  while (ib < nb || is < ns) {
    double v;
    if (is >= ns || (ib < nb && s.bonafide[ib] <= s.spoof[is])) {
      v = s.bonafide[ib];
    } else {
      v = s.spoof[is];
    }
    while (ib < nb && s.bonafide[ib] == v) ++ib;
    while (is < ns && s.spoof[is] == v) ++is;
    double next = std::numeric_limits<double>::infinity();
    if (ib < nb) next = s.bonafide[ib];
    if (is < ns) next = std::min(next, s.spoof[is]);
    const double tau = std::isinf(next) ? next : threshold_between(v, next);
    points.push_back(make(tau, ib, ns - is));
  }
  return points;
}

double eer_from_points(const std::vector<DetPoint>& points, std::size_t nb, std::size_t ns) {
  // |n_miss/nb - n_fa/ns| compared as |n_miss*ns - n_fa*nb| to avoid rounding ties.
  std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
  const DetPoint* chosen = nullptr;
  for (const DetPoint& p : points) {
    const std::uint64_t a = static_cast<std::uint64_t>(p.n_miss) * ns;
    const std::uint64_t b = static_cast<std::uint64_t>(p.n_fa) * nb;
    const std::uint64_t d = a > b ? a - b : b - a;
    if (d < best) {
      best = d;
      chosen = &p;
    }
  }
  return 100.0 * (chosen->p_miss + chosen->p_fa) / 2.0;
}

double min_dcf_from_points(const std::vector<DetPoint>& points, std::size_t nb,
                           std::size_t ns, const MetricConfig& cfg) {
  double best = std::numeric_limits<double>::infinity();
  for (const DetPoint& p : points) {
    best = std::min(best, normalized_dcf(p.n_miss, nb, p.n_fa, ns, cfg));
  }
  return best;
}

double act_dcf_sorted(const Sorted& s, const MetricConfig& cfg) {
  const double tau = bayes_threshold(cfg);
  const auto n_miss = static_cast<std::size_t>(
      std::lower_bound(s.bonafide.begin(), s.bonafide.end(), tau) - s.bonafide.begin());
  const auto n_fa = static_cast<std::size_t>(
      s.spoof.end() - std::lower_bound(s.spoof.begin(), s.spoof.end(), tau));
  return normalized_dcf(n_miss, s.bonafide.size(), n_fa, s.spoof.size(), cfg);
}

// log2(1 + e^x) without overflow.
double softplus_bits(double x) {
  const double nats = x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  return nats / std::numbers::ln2;
}

double cllr_sorted(const Sorted& s) {
  double bon = 0.0;
  for (double v : s.bonafide) bon += softplus_bits(-v);
  double spf = 0.0;
  for (double v : s.spoof) spf += softplus_bits(v);
  return 0.5 * (bon / static_cast<double>(s.bonafide.size()) +
                spf / static_cast<double>(s.spoof.size()));
}

}  // namespace

double MetricConfig::normalizer() const {
  return std::min(c_miss * (1.0 - pi_spoof), c_fa * pi_spoof);
}

void MetricConfig::validate() const {
  if (!(c_miss >= 0.0) || !std::isfinite(c_miss) || !(c_fa >= 0.0) || !std::isfinite(c_fa)) {
    throw InvalidParameter("DCF costs must be finite and non-negative");
  }
  if (!(pi_spoof > 0.0 && pi_spoof < 1.0)) {
    throw InvalidParameter("spoof prior must lie in (0, 1)");
  }
  if (!(normalizer() > 0.0)) {
    throw InvalidParameter("DCF normalizer min(c_miss(1-pi), c_fa pi) must be positive");
  }
}

std::vector<DetPoint> det_points(const ScoreSet& s) {
  require_both_classes(s);
  return sweep(sorted_copy(s));
}

double eer(const ScoreSet& s) {
  require_both_classes(s);
  return eer_from_points(det_points(s), s.bonafide.size(), s.spoof.size());
}

double normalized_dcf(std::size_t n_miss, std::size_t n_bonafide, std::size_t n_fa,
                      std::size_t n_spoof, const MetricConfig& cfg) {
  const double p_miss = static_cast<double>(n_miss) / static_cast<double>(n_bonafide);
  const double p_fa = static_cast<double>(n_fa) / static_cast<double>(n_spoof);
  return (cfg.c_miss * (1.0 - cfg.pi_spoof) * p_miss + cfg.c_fa * cfg.pi_spoof * p_fa) /
         cfg.normalizer();
}

double min_dcf(const ScoreSet& s, const MetricConfig& cfg) {
  cfg.validate();
  require_both_classes(s);
  return min_dcf_from_points(det_points(s), s.bonafide.size(), s.spoof.size(), cfg);
}

double bayes_threshold(const MetricConfig& cfg) {
  return std::log((cfg.c_fa * cfg.pi_spoof) / (cfg.c_miss * (1.0 - cfg.pi_spoof)));
}

double act_dcf(const ScoreSet& s, const MetricConfig& cfg) {
  cfg.validate();
  require_both_classes(s);
  return act_dcf_sorted(sorted_copy(s), cfg);
}

double cllr(const ScoreSet& s) {
  require_both_classes(s);
  return cllr_sorted(sorted_copy(s));
}

MetricSummary evaluate(const ScoreSet& s, const MetricConfig& cfg) {
  cfg.validate();
  require_both_classes(s);
  const Sorted sorted = sorted_copy(s);
  const std::vector<DetPoint> points = sweep(sorted);
  const std::size_t nb = s.bonafide.size();
  const std::size_t ns = s.spoof.size();
  MetricSummary m;
  m.min_dcf = min_dcf_from_points(points, nb, ns, cfg);
  m.act_dcf = act_dcf_sorted(sorted, cfg);
  m.cllr = cllr_sorted(sorted);
  m.eer = eer_from_points(points, nb, ns);
  m.n_bonafide = nb;
  m.n_spoof = ns;
  return m;
}

ScoreSet gaussian_scores(std::size_t n_bonafide, std::size_t n_spoof, double mu_bonafide,
                         double mu_spoof, double sigma, std::uint64_t seed) {
  if (n_bonafide == 0 || n_spoof == 0) {
    throw InvalidParameter("gaussian_scores needs positive class sizes");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidParameter("gaussian_scores needs sigma > 0");
  }
  Rng rng(seed);
  ScoreSet s;
  s.bonafide.resize(n_bonafide);
  s.spoof.resize(n_spoof);
  for (double& v : s.bonafide) v = mu_bonafide + sigma * rng.gaussian();
  for (double& v : s.spoof) v = mu_spoof + sigma * rng.gaussian();
  return s;
}

double analytic_gaussian_eer(double mu_bonafide, double mu_spoof, double sigma) {
  const double d = (mu_bonafide - mu_spoof) / (2.0 * sigma);
  return 50.0 * std::erfc(d / std::numbers::sqrt2);
}

}  // namespace lb::metrics
