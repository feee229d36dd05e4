//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>

#include <doctest.h>

#include "molbo/acquisition.h"

namespace molbo {

TEST_CASE("acquisition: expected improvement closed forms") {
  CHECK(ei(1.0, 0.0, 1.0) == 0.0);
  CHECK(ei(2.5, 0.0, 1.0) == 1.5);
  CHECK(ei(0.0, 0.0, 1.0) == 0.0);
  CHECK(std::abs(ei(0.3, 1.0, 0.3) - 0.3989422804014327) <= 1e-12);
}

TEST_CASE("acquisition: EI lower tail") {
  // phi(-t) - t Q(t), frozen from 50-digit arithmetic.
  const std::pair<double, double> frozen[] = { { 5.0, 5.346165533832815e-08 },
                                               { 7.0, 1.760326011637483e-13 },
                                               { 10.9, 5.201561074979157e-29 },
                                               { 12.0, 1.4605201169845548e-34 },
                                               { 20.0, 1.3700124947295798e-90 } };
  for (const auto &[t, v]: frozen) {
    CHECK(std::abs(ei(0.0, 1.0, t) - v) <= 1e-13 * v);
    CHECK(std::abs(ei(1.0, 2.0, 1.0 + 2.0 * t) - 2.0 * v) <= 1e-13 * 2.0 * v);
  }
  // Both branches agree where they meet.
  const double below = ei(0.0, 1.0, 5.0 + 1e-9), above = ei(0.0, 1.0, 5.0 - 1e-9);
  CHECK(below <= above);
  CHECK(std::abs(below - above) <= 1e-6 * above);
}

TEST_CASE("acquisition: EI against Monte Carlo") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-2, 2);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 10; ++trial) {
    const double mu = u(rng), sigma = 0.05 + std::abs(u(rng)), best = u(rng);
    const int draws = 200000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < draws; ++i) {
      const double v = std::max(0.0, mu + sigma * n01(rng) - best);
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / draws;
    const double se = std::sqrt((sum2 / draws - mean * mean) / draws);
    CHECK(std::abs(ei(mu, sigma, best) - mean) <= 3 * se + 1e-12);
  }
}

TEST_CASE("acquisition: EI monotonicity and sign") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 500; ++trial) {
    const double mu = u(rng), sigma = std::abs(u(rng)), best = u(rng), d = 0.1;
    CHECK(ei(mu, sigma, best) >= 0);
    CHECK(ei(mu + d, sigma, best) >= ei(mu, sigma, best));
    if (mu <= best)
      CHECK(ei(mu, sigma + d, best) >= ei(mu, sigma, best));
  }
}

TEST_CASE("acquisition: UCB") {
  CHECK(ucb(1.5, 0.0, 3.0) == 1.5);
  CHECK(ucb(0.0, 1.0, 4.0) == 2.0);
  CHECK(ucb_beta(1) == doctest::Approx(std::max(0.5, 2 * std::log(M_PI * M_PI / 6))));
  CHECK(ucb_beta(10) == doctest::Approx(2 * std::log(100 * M_PI * M_PI / 6)));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 3);
  for (int trial = 0; trial < 200; ++trial) {
    const double mu = u(rng) - 1.5, s = u(rng), b = u(rng);
    CHECK(ucb(mu, s + 0.2, b) >= ucb(mu, s, b));
  }
}

TEST_CASE("acquisition: TTEI") {
  const std::vector<Prediction> cands { { 0.1, 0.5 }, { 0.9, 0.04 }, { 0.3, 2.0 } };
  std::mt19937_64 rng(1);
  const auto s0 = ttei(cands, 0.5, 0.0, rng);
  for (std::size_t i = 0; i < cands.size(); ++i)
    CHECK(s0[i] == ei(cands[i].mu, std::sqrt(cands[i].var), 0.5));

  const std::vector<Prediction> one { { 2.0, 1.0 } };
  const auto s1 = ttei(one, 0.5, 1.0, rng);
  CHECK(s1[0] == ei(2.0, 1.0, 2.0));

  std::mt19937_64 a(99), b(99);
  for (int i = 0; i < 20; ++i)
    CHECK(ttei(cands, 0.5, 0.3, a) == ttei(cands, 0.5, 0.3, b));
}

TEST_CASE("acquisition: ensemble weights") {
  AcquisitionEnsemble ens;
  for (double p: ens.probabilities())
    CHECK(p == doctest::Approx(1.0 / 3.0));
  for (int i = 0; i < 20; ++i)
    ens.update(AcquisitionKind::kEI, true);
  const double e10 = std::exp(10.0);
  CHECK(ens.probabilities()[0] == doctest::Approx(e10 / (e10 + 2)).epsilon(1e-12));
  CHECK(ens.probabilities()[0] > 0.9);

  AcquisitionEnsemble mixed;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const AcquisitionKind k = mixed.pick(rng);
    mixed.update(k, rng() % 3 == 0);
    const auto p = mixed.probabilities();
    CHECK(std::abs(p[0] + p[1] + p[2] - 1.0) <= 1e-12);
    for (double x: p)
      CHECK(x > 0);
  }

  AcquisitionEnsemble x, y;
  std::mt19937_64 rx(4), ry(4);
  for (int i = 0; i < 30; ++i) {
    const auto kx = x.pick(rx), ky = y.pick(ry);
    CHECK(kx == ky);
    x.update(kx, i % 4 == 0);
    y.update(ky, i % 4 == 0);
  }
}
}  // namespace molbo
