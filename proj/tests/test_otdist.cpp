//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <random>

#include <doctest.h>

#include "molbo/otdist.h"
#include "molbo/smiles.h"
#include "oracle/dense_lp.h"
#include "test_util.h"

namespace molbo {
namespace {
constexpr DistanceConfig kUnitRaw { WeightMode::kUnit, false };
}

TEST_CASE("otdist: structure cost on bond multisets") {
  // Atom with {C-H, C-C, C-C, C-C} against {C-H, C-C, C=C}.
  BondProfile a { { { BondOrder::kSingle, Element::kH, Element::kC },
                    { BondOrder::kSingle, Element::kC, Element::kC },
                    { BondOrder::kSingle, Element::kC, Element::kC },
                    { BondOrder::kSingle, Element::kC, Element::kC } } };
  BondProfile b { { { BondOrder::kSingle, Element::kH, Element::kC },
                    { BondOrder::kSingle, Element::kC, Element::kC },
                    { BondOrder::kDouble, Element::kC, Element::kC } } };
  std::sort(a.entries.begin(), a.entries.end());
  std::sort(b.entries.begin(), b.entries.end());
  CHECK(structure_cost(a, b) == doctest::Approx(0.6));
  CHECK(structure_cost(a, a) == 0.0);
  CHECK(structure_cost(BondProfile {}, BondProfile {}) == 0.0);
}

TEST_CASE("otdist: identity and permutation give zero") {
  const Molecule ch4 = parse_smiles("C");
  for (const auto &cfg: kDistanceConfigs)
    CHECK(solve_ot(ch4, ch4, cfg).distance == doctest::Approx(0.0).scale(1));
  std::mt19937_64 rng(3);
  for (const auto &s: testing::corpus_smiles()) {
    const Molecule m = parse_smiles(s);
    const Molecule p = testing::permuted(m, rng);
    for (double d: distance_vector(m, p))
      CHECK(std::abs(d) <= 1e-9);
  }
}

TEST_CASE("otdist: n-butane vs isobutane regression") {
  // Frozen from the dense LP oracle; agrees with an external LP solver.
  const Molecule a = parse_smiles("CCCC"), b = parse_smiles("CC(C)C");
  const DistanceVector d = distance_vector(a, b);
  CHECK(d[0] == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(d[1] == doctest::Approx(0.8 / 28.0).epsilon(1e-9));
  CHECK(d[2] == doctest::Approx(9.6088).epsilon(1e-9));
  CHECK(d[3] == doctest::Approx(0.0826577661551164).epsilon(1e-9));
  for (WeightMode mode: { WeightMode::kUnit, WeightMode::kMass }) {
    const auto ref = oracle::oracle_ot(a, b, mode);
    CHECK(ref.inequality == doctest::Approx(ref.equality).epsilon(1e-9));
    CHECK(ref.equality
          == doctest::Approx(d[mode == WeightMode::kUnit ? 0 : 2]).epsilon(1e-9));
  }
}

TEST_CASE("otdist: symmetry, bounds and plan feasibility") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const Molecule a = testing::random_molecule(rng, 8);
    const Molecule b = testing::random_molecule(rng, 8);
    const DistanceVector ab = distance_vector(a, b), ba = distance_vector(b, a);
    for (int k = 0; k < 4; ++k) {
      CHECK(ab[k] == doctest::Approx(ba[k]).epsilon(1e-9));
      CHECK(ab[k] >= -1e-12);
    }
    CHECK(ab[1] <= 1.0 + 1e-12);
    CHECK(ab[3] <= 1.0 + 1e-12);

    for (const auto &cfg: kDistanceConfigs) {
      const OtResult r = solve_ot(a, b, cfg);
      const auto y1 = augmented_marginal(a, b, cfg.weight_mode);
      const auto y2 = augmented_marginal(b, a, cfg.weight_mode);
      const Eigen::MatrixXd &u = r.plan.u;
      REQUIRE(u.rows() == static_cast<Eigen::Index>(y1.size()));
      REQUIRE(u.cols() == static_cast<Eigen::Index>(y2.size()));
      for (int i = 0; i < u.rows(); ++i)
        CHECK(std::abs(u.row(i).sum() - y1[i]) <= 1e-9 * (1 + y1[i]));
      for (int j = 0; j < u.cols(); ++j)
        CHECK(std::abs(u.col(j).sum() - y2[j]) <= 1e-9 * (1 + y2[j]));
      CHECK(u.minCoeff() >= -1e-12);

      const CostMatrices costs = build_costs(a, b);
      for (int i = 0; i < costs.label.rows(); ++i)
        for (int j = 0; j < costs.label.cols(); ++j)
          if (costs.label(i, j) > 0)
            CHECK(u(i, j) <= 1e-12);
      const Eigen::MatrixXd cp = augmented_cost(costs);
      CHECK(u.cwiseProduct(cp).sum() == doctest::Approx(r.plan.cost).epsilon(1e-9));
    }
  }
}

TEST_CASE("otdist: class aggregation is exact") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const Molecule a = testing::random_molecule(rng, 7);
    const Molecule b = testing::random_molecule(rng, 7);
    for (const auto &cfg: kDistanceConfigs) {
      const double agg = solve_ot(a, b, cfg, { true }).distance;
      const double full = solve_ot(a, b, cfg, { false }).distance;
      CHECK(agg == doctest::Approx(full).epsilon(1e-9));
    }
  }
}

TEST_CASE("otdist: agrees with both oracle formulations") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 15; ++trial) {
    const Molecule a = testing::random_molecule(rng, 5);
    const Molecule b = testing::random_molecule(rng, 5);
    const DistanceVector d = distance_vector(a, b);
    const auto unit = oracle::oracle_ot(a, b, WeightMode::kUnit);
    CHECK(unit.inequality == doctest::Approx(d[0]).epsilon(1e-8));
    CHECK(unit.equality == doctest::Approx(d[0]).epsilon(1e-8));
    CHECK(solve_ot(a, b, kUnitRaw).distance == doctest::Approx(d[0]).epsilon(1e-9));
  }
}

TEST_CASE("otdist: hydrogen only differences") {
  // Ethane vs ethene differ in H count and C bond order.
  const DistanceVector d = distance_vector(parse_smiles("CC"), parse_smiles("C=C"));
  CHECK(d[0] > 0.0);
  const auto ref = oracle::oracle_ot(parse_smiles("CC"), parse_smiles("C=C"),
                                     WeightMode::kMass);
  CHECK(ref.equality == doctest::Approx(d[2]).epsilon(1e-9));
}
}  // namespace molbo
