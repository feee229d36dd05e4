//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/objectives.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "molbo/error.h"
#include "molbo/rings.h"

namespace molbo {
namespace {
Band band_from_json(const nlohmann::json &j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != 4 || !(v[0] <= v[1] && v[1] <= v[2] && v[2] <= v[3]))
    throw Error(ErrorCode::kInvalidConfig,
                "qed band must be 4 nondecreasing numbers [lo0, lo1, hi1, hi0]");
  return { v[0], v[1], v[2], v[3] };
}

nlohmann::json band_to_json(const Band &b) { return { b.lo0, b.lo1, b.hi1, b.hi0 }; }
}  // namespace

double Band::operator()(double x, double floor) const {
  if (x < lo0 || x > hi0)
    return floor;
  if (x < lo1)
    return floor + (1.0 - floor) * (x - lo0) / (lo1 - lo0);
  if (x > hi1)
    return floor + (1.0 - floor) * (hi0 - x) / (hi0 - hi1);
  return 1.0;
}

ObjectiveTables ObjectiveTables::defaults() {
  ObjectiveTables t;
  t.contributions = {
    { Element::kH, 0.12 },  { Element::kB, -0.20 }, { Element::kC, 0.15 },
    { Element::kN, -0.70 }, { Element::kO, -0.45 }, { Element::kF, 0.40 },
    { Element::kP, -0.30 }, { Element::kS, 0.45 },  { Element::kCl, 0.70 },
    { Element::kBr, 0.90 }, { Element::kI, 1.20 },
  };
  t.mass = { 60.0, 200.0, 450.0, 700.0 };
  t.logp = { -2.0, 0.0, 3.0, 6.0 };
  t.donors = { -1.0, 0.0, 3.0, 7.0 };
  t.acceptors = { -1.0, 1.0, 8.0, 14.0 };
  t.qed_floor = 0.05;
  return t;
}

ObjectiveTables ObjectiveTables::from_json(const nlohmann::json &j) {
  ObjectiveTables t = defaults();
  try {
    if (j.contains("contribution_table")) {
      t.contributions.clear();
      for (const auto &[sym, v]: j.at("contribution_table").items()) {
        const auto e = element_from_symbol(sym);
        if (!e)
          throw Error(ErrorCode::kInvalidConfig,
                      "contribution_table: unknown element '" + sym + "'");
        t.contributions[*e] = v.get<double>();
      }
    }
    if (j.contains("qed_bands")) {
      const auto &b = j.at("qed_bands");
      if (b.contains("mass"))
        t.mass = band_from_json(b.at("mass"));
      if (b.contains("logp"))
        t.logp = band_from_json(b.at("logp"));
      if (b.contains("donors"))
        t.donors = band_from_json(b.at("donors"));
      if (b.contains("acceptors"))
        t.acceptors = band_from_json(b.at("acceptors"));
    }
    if (j.contains("qed_floor"))
      t.qed_floor = j.at("qed_floor").get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("objective config: ") + e.what());
  }
  if (!(t.qed_floor > 0 && t.qed_floor <= 1))
    throw Error(ErrorCode::kInvalidConfig, "qed_floor must lie in (0, 1]");
  return t;
}

nlohmann::json ObjectiveTables::to_json() const {
  nlohmann::json table = nlohmann::json::object();
  for (const auto &[e, v]: contributions)
    table[std::string(symbol(e))] = v;
  return { { "contribution_table", table },
           { "qed_bands",
             { { "mass", band_to_json(mass) },
               { "logp", band_to_json(logp) },
               { "donors", band_to_json(donors) },
               { "acceptors", band_to_json(acceptors) } } },
           { "qed_floor", qed_floor } };
}

Objective Objective::parse(std::string_view spec) {
  Objective o;
  if (spec.rfind("heavy_atoms:", 0) == 0) {
    const std::string num(spec.substr(12));
    char *end = nullptr;
    const long v = std::strtol(num.c_str(), &end, 10);
    if (num.empty() || *end != '\0' || v < 0 || v > 100000)
      throw Error(ErrorCode::kInvalidConfig,
                  "objective: bad heavy atom target '" + num + "'");
    o.kind = ObjectiveKind::kHeavyAtomTarget;
    o.target = static_cast<int>(v);
  } else if (spec == "logp") {
    o.kind = ObjectiveKind::kLogP;
  } else if (spec == "pen_logp") {
    o.kind = ObjectiveKind::kPenLogP;
  } else if (spec == "qed") {
    o.kind = ObjectiveKind::kQed;
  } else {
    throw Error(ErrorCode::kInvalidConfig,
                "objective: expected heavy_atoms:<n>, logp, pen_logp or qed, got '"
                    + std::string(spec) + "'");
  }
  return o;
}

std::string Objective::name() const {
  switch (kind) {
  case ObjectiveKind::kHeavyAtomTarget:
    return "heavy_atoms:" + std::to_string(target);
  case ObjectiveKind::kLogP:
    return "logp";
  case ObjectiveKind::kPenLogP:
    return "pen_logp";
  case ObjectiveKind::kQed:
    return "qed";
  }
  return "?";
}

double logp_surrogate(const Molecule &mol, const ObjectiveTables &tables) {
  auto lookup = [&](Element e) {
    auto it = tables.contributions.find(e);
    if (it == tables.contributions.end())
      throw Error(ErrorCode::kMissingContribution,
                  "no logP contribution for element " + std::string(symbol(e)));
    return it->second;
  };
  // Count first and sum in element order so the value does not depend on
  // atom numbering.
  std::map<Element, int> counts;
  for (int i = 0; i < mol.size(); ++i) {
    ++counts[mol.element(i)];
    if (mol.element(i) != Element::kH && mol.implicit_hydrogens(i) > 0)
      counts[Element::kH] += mol.implicit_hydrogens(i);
  }
  double sum = 0;
  for (const auto &[e, n]: counts)
    sum += n * lookup(e);
  return sum;
}

int ring_penalty(const Molecule &mol) {
  int p = 0;
  for (const Ring &r: smallest_cycle_basis(mol))
    p += std::max(0, static_cast<int>(r.size()) - 6);
  return p;
}

double complexity_proxy(const Molecule &mol) {
  int branched = 0;
  for (int i = 0; i < mol.size(); ++i) {
    if (mol.element(i) != Element::kH && mol.heavy_degree(i) >= 3)
      ++branched;
  }
  const auto rings = smallest_cycle_basis(mol);
  int shared = 0;
  for (std::size_t a = 0; a < rings.size(); ++a) {
    const std::set<int> atoms(rings[a].begin(), rings[a].end());
    for (std::size_t b = 0; b < rings.size(); ++b) {
      if (a == b)
        continue;
      const bool overlap = std::any_of(rings[b].begin(), rings[b].end(),
                                       [&](int x) { return atoms.count(x) > 0; });
      if (overlap) {
        ++shared;
        break;
      }
    }
  }
  return 0.25 * branched + 0.5 * shared;
}

int hbond_donors(const Molecule &mol) {
  int n = 0;
  for (int i = 0; i < mol.size(); ++i) {
    const Element e = mol.element(i);
    if (e != Element::kO && e != Element::kN)
      continue;
    bool has_h = mol.implicit_hydrogens(i) > 0;
    for (const Neighbor &nb: mol.neighbors(i))
      has_h = has_h || mol.element(nb.atom) == Element::kH;
    n += has_h;
  }
  return n;
}

int hbond_acceptors(const Molecule &mol) {
  int n = 0;
  for (int i = 0; i < mol.size(); ++i)
    n += mol.element(i) == Element::kO || mol.element(i) == Element::kN;
  return n;
}

double evaluate(const Objective &obj, const Molecule &mol) {
  switch (obj.kind) {
  case ObjectiveKind::kHeavyAtomTarget:
    return 0.0 - std::abs(static_cast<double>(mol.heavy_atom_count() - obj.target));
  case ObjectiveKind::kLogP:
    return logp_surrogate(mol, obj.tables);
  case ObjectiveKind::kPenLogP:
    return logp_surrogate(mol, obj.tables) - complexity_proxy(mol) - ring_penalty(mol);
  case ObjectiveKind::kQed: {
    const ObjectiveTables &t = obj.tables;
    const double f = t.qed_floor;
    const double d[4] = { t.mass(molecular_mass(mol), f),
                          t.logp(logp_surrogate(mol, t), f),
                          t.donors(hbond_donors(mol), f),
                          t.acceptors(hbond_acceptors(mol), f) };
    double log_sum = 0;
    for (double x: d)
      log_sum += std::log(x);
    return std::exp(log_sum / 4.0);
  }
  }
  return 0.0;
}

}  // namespace molbo
