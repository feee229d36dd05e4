//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_ELEMENT_H_
#define MOLBO_ELEMENT_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace molbo {

enum class Element : std::uint8_t {
  kH,
  kB,
  kC,
  kN,
  kO,
  kF,
  kP,
  kS,
  kCl,
  kBr,
  kI,
};

inline constexpr int kNumElements = 11;

struct ElementInfo {
  std::string_view symbol;
  double atomic_mass;
  int default_valence;
  // Ascending list of admissible total valences; hydrogens fill up to the
  // smallest entry not below the explicit bond sum.
  std::span<const int> allowed_valences;
  bool aromatic_capable;
};

const ElementInfo &element_info(Element e);

inline std::string_view symbol(Element e) {
  return element_info(e).symbol;
}

std::optional<Element> element_from_symbol(std::string_view sym);

inline constexpr std::array<Element, kNumElements> kAllElements = {
  Element::kH, Element::kB,  Element::kC,  Element::kN,
  Element::kO, Element::kF,  Element::kP,  Element::kS,
  Element::kCl, Element::kBr, Element::kI,
};

enum class BondOrder : std::uint8_t {
  kSingle,
  kDouble,
  kTriple,
  kAromatic,
};

// Valence contribution in half units (single = 2, aromatic = 3), so that
// aromatic sums stay exact in integer arithmetic.
constexpr int valence_contribution_x2(BondOrder order) {
  switch (order) {
  case BondOrder::kSingle:
    return 2;
  case BondOrder::kDouble:
    return 4;
  case BondOrder::kTriple:
    return 6;
  case BondOrder::kAromatic:
    return 3;
  }
  return 0;
}

constexpr double valence_contribution(BondOrder order) {
  return valence_contribution_x2(order) / 2.0;
}

// "-", "=", "#", ":"
char bond_symbol(BondOrder order);

}  // namespace molbo

#endif  // MOLBO_ELEMENT_H_
