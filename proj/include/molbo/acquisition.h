//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_ACQUISITION_H_
#define MOLBO_ACQUISITION_H_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "molbo/gp.h"

namespace molbo {

enum class AcquisitionKind : std::uint8_t { kEI, kUCB, kTTEI };

inline constexpr std::array<AcquisitionKind, 3> kAcquisitionKinds = {
  AcquisitionKind::kEI, AcquisitionKind::kUCB, AcquisitionKind::kTTEI
};

std::string_view acquisition_name(AcquisitionKind kind);

inline constexpr double kDefaultTtEpsilon = 0.3;

/// E[max(0, f - best)] for f ~ N(mu, sigma^2).
double ei(double mu, double sigma, double best);

double ucb(double mu, double sigma, double beta_t);

/// 2 log(t^2 pi^2 / 6), clamped to >= 0.5.
double ucb_beta(int t);

/// EI scores; with probability epsilon the incumbent is re-anchored to
/// max(best, mu of the EI-argmax candidate). One draw per call.
std::vector<double> ttei(std::span<const Prediction> candidates, double best,
                         double epsilon, std::mt19937_64 &rng);

/// Scores for every candidate under the given acquisition.
std::vector<double> acquisition_scores(AcquisitionKind kind,
                                       std::span<const Prediction> candidates,
                                       double best, int t, std::mt19937_64 &rng,
                                       double tt_epsilon = kDefaultTtEpsilon);

/// Multiplicative-weights selection over {EI, UCB, TTEI}.
class AcquisitionEnsemble {
public:
  explicit AcquisitionEnsemble(double eta = 0.5);

  std::array<double, 3> probabilities() const;
  AcquisitionKind pick(std::mt19937_64 &rng) const;
  /// Multiplies the weight of `used` by exp(eta * reward) and renormalizes.
  void update(AcquisitionKind used, bool improved);

private:
  double eta_;
  std::array<double, 3> weights_;
};

}  // namespace molbo

#endif  // MOLBO_ACQUISITION_H_
