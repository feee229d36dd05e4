//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_OTDIST_H_
#define MOLBO_OTDIST_H_

#include <array>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "molbo/molecule.h"

namespace molbo {

/// Cost per unit weight of matching atoms with different element labels.
/// Leaving a unit unmatched on both sides costs 2, so any value above 2 keeps
/// mismatched labels out of every optimal plan.
inline constexpr double kMismatchPenalty = 10.0;

struct DistanceConfig {
  WeightMode weight_mode;
  bool normalize;
};

/// Fixed order of the four dissimilarity variants.
inline constexpr std::array<DistanceConfig, 4> kDistanceConfigs = { {
  { WeightMode::kUnit, false },
  { WeightMode::kUnit, true },
  { WeightMode::kMass, false },
  { WeightMode::kMass, true },
} };

inline constexpr std::array<std::string_view, 4> kDistanceConfigNames = {
  "unit_raw", "unit_norm", "mass_raw", "mass_norm"
};

using DistanceVector = std::array<double, 4>;

/// Rows index the atoms of add_explicit_hydrogens(m1), columns those of
/// add_explicit_hydrogens(m2).
struct CostMatrices {
  Eigen::MatrixXd label;      // 0 or kMismatchPenalty
  Eigen::MatrixXd structure;  // fraction of dissimilar incident bonds
};

CostMatrices build_costs(const Molecule &m1, const Molecule &m2);

/// 1 - |P_a ∩ P_b| / |P_a ∪ P_b| on multisets; 0 when both are empty.
double structure_cost(const BondProfile &a, const BondProfile &b);

/// The plan over the augmented (n1+1) x (n2+1) problem; the last row and
/// column hold unmatched weight.
struct TransportPlan {
  Eigen::MatrixXd u;
  double cost = 0;
};

struct OtResult {
  double distance = 0;
  TransportPlan plan;
};

struct OtOptions {
  /// Merge atoms with identical (element, bond profile) before solving.
  /// Interchangeable atoms share every cost entry, so the optimum is
  /// unchanged; the returned plan splits class flows proportionally to atom
  /// weight.
  bool aggregate_equivalent_atoms = true;
};

/// Marginal of the augmented problem for `self`: atom weights of the
/// hydrogen-expanded molecule followed by the total weight of `other`.
std::vector<double> augmented_marginal(const Molecule &self,
                                       const Molecule &other, WeightMode mode);

/// Augmented cost [C 1; 1^T 0] with C = label + structure.
Eigen::MatrixXd augmented_cost(const CostMatrices &costs);

/// Solves min <U', C'> subject to U' 1 = y1, U'^T 1 = y2 exactly. The
/// distance is the optimal cost, divided by m(M1) + m(M2) when normalizing.
/// Throws Error(kSolverFailure).
OtResult solve_ot(const Molecule &m1, const Molecule &m2, DistanceConfig cfg,
                  OtOptions options = {});

/// Precomputed per-molecule data for repeated distance evaluations.
class OtSignature {
public:
  explicit OtSignature(const Molecule &mol);

  int num_classes() const { return static_cast<int>(elements_.size()); }
  Element element(int c) const { return elements_[c]; }
  const BondProfile &profile(int c) const { return profiles_[c]; }
  double weight(int c, WeightMode mode) const {
    return mode == WeightMode::kUnit ? counts_[c] : masses_[c];
  }
  double total_weight(WeightMode mode) const {
    return mode == WeightMode::kUnit ? total_count_ : total_mass_;
  }
  const std::vector<int> &members(int c) const { return members_[c]; }

private:
  std::vector<Element> elements_;
  std::vector<BondProfile> profiles_;
  std::vector<double> counts_;
  std::vector<double> masses_;
  std::vector<std::vector<int>> members_;
  double total_count_ = 0;
  double total_mass_ = 0;
};

/// [d(Unit,raw), d(Unit,norm), d(Mass,raw), d(Mass,norm)].
DistanceVector distance_vector(const Molecule &m1, const Molecule &m2);
DistanceVector distance_vector(const OtSignature &a, const OtSignature &b);

}  // namespace molbo

#endif  // MOLBO_OTDIST_H_
