//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_OBJECTIVES_H_
#define MOLBO_OBJECTIVES_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include <json.hpp>

#include "molbo/molecule.h"

namespace molbo {

/// Trapezoid desirability: `floor` outside [lo0, hi0], 1 on [lo1, hi1],
/// linear in between.
struct Band {
  double lo0;
  double lo1;
  double hi1;
  double hi0;

  double operator()(double x, double floor) const;
};

/// Configuration data for the surrogate objectives. The default values are
/// hand-picked stand-ins, not fitted parameters of any published model.
struct ObjectiveTables {
  std::map<Element, double> contributions;
  Band mass;
  Band logp;
  Band donors;
  Band acceptors;
  double qed_floor;

  static ObjectiveTables defaults();
  /// Keys: contribution_table {symbol: value}, qed_bands {mass, logp,
  /// donors, acceptors: [lo0, lo1, hi1, hi0]}, qed_floor. A supplied
  /// contribution_table replaces the default one wholesale.
  static ObjectiveTables from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;
};

enum class ObjectiveKind : std::uint8_t { kHeavyAtomTarget, kLogP, kPenLogP, kQed };

struct Objective {
  ObjectiveKind kind = ObjectiveKind::kQed;
  int target = 0;  // kHeavyAtomTarget only
  ObjectiveTables tables = ObjectiveTables::defaults();

  /// "heavy_atoms:<n>", "logp", "pen_logp" or "qed". Throws kInvalidConfig.
  static Objective parse(std::string_view spec);
  std::string name() const;
};

/// Throws kMissingContribution when the table lacks an element of `mol`.
double evaluate(const Objective &obj, const Molecule &mol);

double logp_surrogate(const Molecule &mol, const ObjectiveTables &tables);
/// Sum over a smallest cycle basis of max(0, ring size - 6).
int ring_penalty(const Molecule &mol);
/// 0.25 per atom with >= 3 heavy neighbours plus 0.5 per ring sharing an
/// atom with another ring.
double complexity_proxy(const Molecule &mol);
/// O/N atoms carrying at least one hydrogen.
int hbond_donors(const Molecule &mol);
/// O/N atoms.
int hbond_acceptors(const Molecule &mol);

}  // namespace molbo

#endif  // MOLBO_OBJECTIVES_H_
