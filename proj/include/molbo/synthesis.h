//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_SYNTHESIS_H_
#define MOLBO_SYNTHESIS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "molbo/molecule.h"

namespace molbo {

enum class Condition : std::uint8_t { kAcidCat, kBase, kHeat, kPdCat, kNeat, kJoin };

inline constexpr std::array<Condition, 6> kAllConditions = {
  Condition::kAcidCat, Condition::kBase, Condition::kHeat,
  Condition::kPdCat,   Condition::kNeat, Condition::kJoin,
};

std::string_view condition_name(Condition c);
/// Throws kInvalidConfig for names outside the library.
Condition parse_condition(std::string_view name);

/// Small bit set over the fixed condition library.
class ConditionSet {
public:
  constexpr ConditionSet() = default;
  ConditionSet(std::initializer_list<Condition> cs) {
    for (Condition c: cs)
      insert(c);
  }

  void insert(Condition c) { bits_ |= bit(c); }
  bool contains(Condition c) const { return (bits_ & bit(c)) != 0; }
  bool contains_all(ConditionSet other) const {
    return (bits_ & other.bits_) == other.bits_;
  }
  bool empty() const { return bits_ == 0; }
  int size() const;
  /// Members in library enum order.
  std::vector<Condition> members() const;
  std::vector<std::string> names() const;

  bool operator==(const ConditionSet &) const = default;

private:
  static constexpr std::uint8_t bit(Condition c) {
    return static_cast<std::uint8_t>(1U << static_cast<unsigned>(c));
  }
  std::uint8_t bits_ = 0;
};

enum class OracleKind : std::uint8_t { kTemplate, kJoin };

std::string_view oracle_name(OracleKind kind);
OracleKind parse_oracle(std::string_view name);

struct SynthesisOutcome {
  std::string template_name;
  /// Reagent slots that reacted, in role order.
  std::vector<int> reagents_used;
  /// Distinct products sorted by canonical form.
  std::vector<Molecule> products;
};

/// Names of the template library in firing order.
std::span<const std::string_view> template_names();

/// Template oracle: the first template (library order) that matches an
/// ordered pair of distinct reagent slots (pairs tried lexicographically)
/// and whose conditions are all present fires. Single reagents never react.
/// Join oracle: exactly two reagents and "join" present; bonds the
/// lowest-ranked hydrogen-bearing heavy atom of each.
/// Returns nullopt when nothing fires. Throws kInvalidConfig unless
/// 1 <= |reagents| <= 3.
std::optional<SynthesisOutcome> synthesize(std::span<const Molecule> reagents,
                                           ConditionSet conditions,
                                           OracleKind oracle);

struct SynthesisNode {
  std::string molecule;
  std::vector<std::string> parents;
  std::optional<std::string> template_name;
  ConditionSet conditions;
  int step = 0;
};

struct RecipeStep {
  std::string molecule;
  std::vector<std::string> parents;
  std::string template_name;
  ConditionSet conditions;
  int step;
};

struct Recipe {
  std::string target;
  /// Initial-pool ancestors of the target (the target itself when it is a
  /// pool molecule), sorted.
  std::vector<std::string> initial_reagents;
  /// Reactions in topological order.
  std::vector<RecipeStep> steps;
};

class SynthesisDag {
public:
  /// Adds a pool molecule at step 0. No-op if already present.
  void add_initial(const Molecule &mol);

  /// Inserts products whose parents are already recorded. Products already
  /// in the DAG keep their earliest recipe. Returns the canonical forms that
  /// were new. Throws kUnknownMolecule for a missing parent and
  /// kCycleDetected if `step` does not exceed every parent's step.
  std::vector<std::string> record(std::span<const Molecule> products,
                                  std::span<const std::string> parents,
                                  const std::string &template_name,
                                  ConditionSet conditions, int step);

  bool contains(std::string_view canonical) const;
  /// Throws kUnknownMolecule.
  const SynthesisNode &node(std::string_view canonical) const;
  const std::map<std::string, SynthesisNode, std::less<>> &nodes() const {
    return nodes_;
  }
  std::size_t size() const { return nodes_.size(); }

  /// Minimal ancestor closure of `target`. Throws kUnknownMolecule.
  Recipe recipe(std::string_view target) const;

  nlohmann::json to_json() const;
  static SynthesisDag from_json(const nlohmann::json &j);

private:
  std::map<std::string, SynthesisNode, std::less<>> nodes_;
};

/// One entry of SynthesisDag::to_json()["nodes"].
nlohmann::json node_to_json(const SynthesisNode &node);
nlohmann::json recipe_to_json(const Recipe &recipe);
/// One node or edge per line:
///   node <smiles> step=<k> [pool]
///   edge <parent> -> <child> template=<name> conditions=<a,b>
std::string recipe_to_graph_text(const Recipe &recipe);

/// Re-runs every recipe step through the oracle and checks that each
/// recorded product is regenerated.
bool replay_recipe(const Recipe &recipe, OracleKind oracle);

}  // namespace molbo

#endif  // MOLBO_SYNTHESIS_H_
