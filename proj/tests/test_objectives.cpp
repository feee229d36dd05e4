//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <random>

#include <doctest.h>

#include "molbo/error.h"
#include "molbo/objectives.h"
#include "molbo/rings.h"
#include "molbo/smiles.h"
#include "test_util.h"

namespace molbo {

TEST_CASE("rings: smallest cycle basis") {
  CHECK(smallest_cycle_basis(parse_smiles("CCCC")).empty());
  const auto hex = smallest_cycle_basis(parse_smiles("C1CCCCC1"));
  REQUIRE(hex.size() == 1);
  CHECK(hex[0].size() == 6);
  // Naphthalene-like decalin: two 6-rings, not the 10-ring envelope.
  const auto dec = smallest_cycle_basis(parse_smiles("C1CCC2CCCCC2C1"));
  REQUIRE(dec.size() == 2);
  CHECK(dec[0].size() == 6);
  CHECK(dec[1].size() == 6);
  // Cubane: cyclomatic number 5, all 4-rings.
  const auto cub = smallest_cycle_basis(parse_smiles("C12C3C4C1C5C2C3C45"));
  REQUIRE(cub.size() == 5);
  for (const auto &r: cub)
    CHECK(r.size() == 4);
  // Hydrogens do not create rings.
  CHECK(smallest_cycle_basis(add_explicit_hydrogens(parse_smiles("C1CC1"))).size() == 1);
}

TEST_CASE("objectives: heavy atom target") {
  const Objective o = Objective::parse("heavy_atoms:10");
  CHECK(evaluate(o, parse_smiles("CCCCCCCCCC")) == 0.0);
  CHECK(evaluate(o, parse_smiles("CCC")) == -7.0);
  CHECK(evaluate(o, parse_smiles("CCCCCCCCCCCC")) == -2.0);
  CHECK(o.name() == "heavy_atoms:10");
  CHECK_THROWS_AS(Objective::parse("heavy_atoms:x"), Error);
  CHECK_THROWS_AS(Objective::parse("sa_score"), Error);
}

TEST_CASE("objectives: ring penalty and complexity") {
  CHECK(ring_penalty(parse_smiles("C1CCCCC1")) == 0);
  CHECK(ring_penalty(parse_smiles("C1CCCCCCC1")) == 2);
  CHECK(complexity_proxy(parse_smiles("CCO")) == 0.0);
  CHECK(complexity_proxy(parse_smiles("CC(C)C")) == 0.25);
  // Decalin: two bridgehead atoms, two rings sharing them.
  CHECK(complexity_proxy(parse_smiles("C1CCC2CCCCC2C1")) == doctest::Approx(0.5 + 1.0));
}

TEST_CASE("objectives: pen-logP on ethanol by hand") {
  const ObjectiveTables t = ObjectiveTables::defaults();
  // C2H6O from the shipped table.
  const double expected = 2 * t.contributions.at(Element::kC)
                          + 6 * t.contributions.at(Element::kH)
                          + t.contributions.at(Element::kO);
  Objective o = Objective::parse("pen_logp");
  CHECK(evaluate(o, parse_smiles("CCO")) == doctest::Approx(expected));
  CHECK(evaluate(o, add_explicit_hydrogens(parse_smiles("CCO")))
        == doctest::Approx(expected));
  CHECK(expected == doctest::Approx(2 * 0.15 + 6 * 0.12 - 0.45));
}

TEST_CASE("objectives: QED surrogate range and donors") {
  const Objective q = Objective::parse("qed");
  for (const auto &s: testing::corpus_smiles()) {
    const double v = evaluate(q, parse_smiles(s));
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
  CHECK(hbond_donors(parse_smiles("CCO")) == 1);
  CHECK(hbond_donors(parse_smiles("COC")) == 0);
  CHECK(hbond_acceptors(parse_smiles("NCCO")) == 2);
  const Band b { 0, 1, 2, 4 };
  CHECK(b(-1, 0.05) == 0.05);
  CHECK(b(1.5, 0.05) == 1.0);
  CHECK(b(3, 0.0) == doctest::Approx(0.5));
}

TEST_CASE("objectives: relabeling invariance") {
  std::mt19937_64 rng(6);
  const Objective objs[] = { Objective::parse("qed"), Objective::parse("pen_logp"),
                             Objective::parse("logp"), Objective::parse("heavy_atoms:7") };
  for (const auto &s: testing::corpus_smiles()) {
    const Molecule m = parse_smiles(s);
    const Molecule p = testing::permuted(m, rng);
    for (const auto &o: objs)
      CHECK(evaluate(o, m) == evaluate(o, p));
  }
}

TEST_CASE("objectives: config tables") {
  nlohmann::json j = { { "contribution_table", { { "C", 1.0 }, { "H", 0.0 } } } };
  Objective o = Objective::parse("logp");
  o.tables = ObjectiveTables::from_json(j);
  CHECK(evaluate(o, parse_smiles("CCC")) == 3.0);
  try {
    evaluate(o, parse_smiles("CCO"));
    FAIL("expected missing contribution");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kMissingContribution);
  }
  const ObjectiveTables d = ObjectiveTables::defaults();
  CHECK(ObjectiveTables::from_json(d.to_json()).to_json() == d.to_json());
  CHECK_THROWS_AS(ObjectiveTables::from_json({ { "qed_bands", { { "mass", { 3, 2, 1, 0 } } } } }),
                  Error);
  for (Element e: kAllElements)
    CHECK(d.contributions.count(e) == 1);
}
}  // namespace molbo
