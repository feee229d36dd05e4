//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/acquisition.h"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace molbo {
namespace {
double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

std::size_t index_of(AcquisitionKind kind) { return static_cast<std::size_t>(kind); }
}  // namespace

std::string_view acquisition_name(AcquisitionKind kind) {
  switch (kind) {
  case AcquisitionKind::kEI:
    return "EI";
  case AcquisitionKind::kUCB:
    return "UCB";
  case AcquisitionKind::kTTEI:
    return "TTEI";
  }
  return "?";
}

double ei(double mu, double sigma, double best) {
  const double diff = mu - best;
  if (sigma <= 0)
    return std::max(0.0, diff);
  const double z = diff / sigma;
  if (z < -5.0) {
    // sigma * (phi(z) + z Phi(z)) cancels badly in the lower tail; with
    // t = -z and the Mills ratio continued fraction
    // Q(t) / phi(t) = 1 / (t + g1), g_k = k / (t + g_{k+1}), it equals
    // sigma * phi(t) * g1 / (t + g1).
    const double t = -z;
    double g = 0.0;
    for (int k = 200; k >= 1; --k)
      g = k / (t + g);
    return sigma * normal_pdf(t) * g / (t + g);
  }
  return std::max(0.0, diff * normal_cdf(z) + sigma * normal_pdf(z));
}

double ucb(double mu, double sigma, double beta_t) {
  return mu + std::sqrt(beta_t) * sigma;
}

double ucb_beta(int t) {
  const double tt = static_cast<double>(std::max(t, 1));
  return std::max(0.5, 2.0 * std::log(tt * tt * std::numbers::pi * std::numbers::pi / 6.0));
}

std::vector<double> ttei(std::span<const Prediction> candidates, double best,
                         double epsilon, std::mt19937_64 &rng) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const Prediction &p: candidates)
    scores.push_back(ei(p.mu, std::sqrt(p.var), best));
  if (candidates.empty())
    return scores;
  const bool reanchor = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < epsilon;
  if (!reanchor)
    return scores;
  const std::size_t top = static_cast<std::size_t>(
      std::max_element(scores.begin(), scores.end()) - scores.begin());
  const double anchor = std::max(best, candidates[top].mu);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    scores[i] = ei(candidates[i].mu, std::sqrt(candidates[i].var), anchor);
  return scores;
}

std::vector<double> acquisition_scores(AcquisitionKind kind,
                                       std::span<const Prediction> candidates,
                                       double best, int t, std::mt19937_64 &rng,
                                       double tt_epsilon) {
  std::vector<double> scores;
  switch (kind) {
  case AcquisitionKind::kEI:
    for (const Prediction &p: candidates)
      scores.push_back(ei(p.mu, std::sqrt(p.var), best));
    break;
  case AcquisitionKind::kUCB: {
    const double beta = ucb_beta(t);
    for (const Prediction &p: candidates)
      scores.push_back(ucb(p.mu, std::sqrt(p.var), beta));
    break;
  }
  case AcquisitionKind::kTTEI:
    scores = ttei(candidates, best, tt_epsilon, rng);
    break;
  }
  return scores;
}

AcquisitionEnsemble::AcquisitionEnsemble(double eta)
    : eta_(eta), weights_ { 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0 } { }

std::array<double, 3> AcquisitionEnsemble::probabilities() const {
  const double total = weights_[0] + weights_[1] + weights_[2];
  return { weights_[0] / total, weights_[1] / total, weights_[2] / total };
}

AcquisitionKind AcquisitionEnsemble::pick(std::mt19937_64 &rng) const {
  const auto p = probabilities();
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u < p[0])
    return AcquisitionKind::kEI;
  if (u < p[0] + p[1])
    return AcquisitionKind::kUCB;
  return AcquisitionKind::kTTEI;
}

void AcquisitionEnsemble::update(AcquisitionKind used, bool improved) {
  weights_[index_of(used)] *= std::exp(eta_ * (improved ? 1.0 : 0.0));
  const double total = weights_[0] + weights_[1] + weights_[2];
  for (double &w: weights_)
    w /= total;
}

}  // namespace molbo
