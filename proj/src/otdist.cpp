//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/otdist.h"

#include <map>
#include <utility>
#include <vector>

#include "molbo/transport.h"

namespace molbo {
namespace {
struct ClassSolution {
  transport::Solution sol;
  double total1;
  double total2;
};

Eigen::MatrixXd class_cost(const OtSignature &a, const OtSignature &b) {
  const int n1 = a.num_classes(), n2 = b.num_classes();
  Eigen::MatrixXd c(n1 + 1, n2 + 1);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      c(i, j) = (a.element(i) == b.element(j) ? 0.0 : kMismatchPenalty)
                + structure_cost(a.profile(i), b.profile(j));
    }
    c(i, n2) = 1.0;
  }
  for (int j = 0; j < n2; ++j)
    c(n1, j) = 1.0;
  c(n1, n2) = 0.0;
  return c;
}

ClassSolution solve_classes(const OtSignature &a, const OtSignature &b,
                            const Eigen::MatrixXd &cost, WeightMode mode) {
  const int n1 = a.num_classes(), n2 = b.num_classes();
  std::vector<double> y1(n1 + 1), y2(n2 + 1);
  for (int i = 0; i < n1; ++i)
    y1[i] = a.weight(i, mode);
  for (int j = 0; j < n2; ++j)
    y2[j] = b.weight(j, mode);
  y1[n1] = b.total_weight(mode);
  y2[n2] = a.total_weight(mode);
  return { transport::solve(cost, y1, y2), a.total_weight(mode),
           b.total_weight(mode) };
}
}  // namespace

double structure_cost(const BondProfile &a, const BondProfile &b) {
  const std::size_t uni = profile_union_size(a, b);
  if (uni == 0)
    return 0.0;
  return 1.0
         - static_cast<double>(profile_intersection_size(a, b))
               / static_cast<double>(uni);
}

CostMatrices build_costs(const Molecule &m1, const Molecule &m2) {
  const Molecule a = add_explicit_hydrogens(m1);
  const Molecule b = add_explicit_hydrogens(m2);
  std::vector<BondProfile> pa, pb;
  for (int i = 0; i < a.size(); ++i)
    pa.push_back(bond_profile(a, i));
  for (int j = 0; j < b.size(); ++j)
    pb.push_back(bond_profile(b, j));

  CostMatrices c { Eigen::MatrixXd(a.size(), b.size()),
                   Eigen::MatrixXd(a.size(), b.size()) };
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < b.size(); ++j) {
      c.label(i, j) = a.element(i) == b.element(j) ? 0.0 : kMismatchPenalty;
      c.structure(i, j) = structure_cost(pa[i], pb[j]);
    }
  }
  return c;
}

std::vector<double> augmented_marginal(const Molecule &self,
                                       const Molecule &other, WeightMode mode) {
  const Molecule s = add_explicit_hydrogens(self);
  std::vector<double> y;
  y.reserve(s.size() + 1);
  for (Element e: s.atoms())
    y.push_back(atom_weight(e, mode));
  y.push_back(total_weight(add_explicit_hydrogens(other), mode));
  return y;
}

Eigen::MatrixXd augmented_cost(const CostMatrices &costs) {
  const Eigen::Index n1 = costs.label.rows(), n2 = costs.label.cols();
  Eigen::MatrixXd c = Eigen::MatrixXd::Ones(n1 + 1, n2 + 1);
  c.topLeftCorner(n1, n2) = costs.label + costs.structure;
  c(n1, n2) = 0.0;
  return c;
}

OtSignature::OtSignature(const Molecule &mol) {
  const Molecule h = add_explicit_hydrogens(mol);
  std::map<std::pair<Element, BondProfile>, int> index;
  for (int i = 0; i < h.size(); ++i) {
    auto key = std::make_pair(h.element(i), bond_profile(h, i));
    auto [it, inserted] = index.try_emplace(key, 0);
    if (inserted) {
      it->second = static_cast<int>(elements_.size());
      elements_.push_back(key.first);
      profiles_.push_back(key.second);
      counts_.push_back(0);
      masses_.push_back(0);
      members_.emplace_back();
    }
    const int c = it->second;
    counts_[c] += 1.0;
    masses_[c] += atom_weight(h.element(i), WeightMode::kMass);
    members_[c].push_back(i);
    total_count_ += 1.0;
    total_mass_ += atom_weight(h.element(i), WeightMode::kMass);
  }
}

OtResult solve_ot(const Molecule &m1, const Molecule &m2, DistanceConfig cfg,
                  OtOptions options) {
  const Molecule a = add_explicit_hydrogens(m1);
  const Molecule b = add_explicit_hydrogens(m2);
  const double total1 = total_weight(a, cfg.weight_mode);
  const double total2 = total_weight(b, cfg.weight_mode);

  OtResult result;
  if (options.aggregate_equivalent_atoms) {
    const OtSignature sa(a), sb(b);
    const ClassSolution cs =
        solve_classes(sa, sb, class_cost(sa, sb), cfg.weight_mode);
    const Eigen::MatrixXd &uc = cs.sol.plan;
    const int k1 = sa.num_classes(), k2 = sb.num_classes();

    // Split class flows proportionally to atom weight.
    std::vector<int> cls1(a.size()), cls2(b.size());
    for (int c = 0; c < k1; ++c) {
      for (int i: sa.members(c))
        cls1[i] = c;
    }
    for (int c = 0; c < k2; ++c) {
      for (int j: sb.members(c))
        cls2[j] = c;
    }
    Eigen::MatrixXd u(a.size() + 1, b.size() + 1);
    for (int i = 0; i < a.size(); ++i) {
      const int ci = cls1[i];
      const double fi = atom_weight(a.element(i), cfg.weight_mode)
                        / sa.weight(ci, cfg.weight_mode);
      for (int j = 0; j < b.size(); ++j) {
        const int cj = cls2[j];
        const double fj = atom_weight(b.element(j), cfg.weight_mode)
                          / sb.weight(cj, cfg.weight_mode);
        u(i, j) = uc(ci, cj) * fi * fj;
      }
      u(i, b.size()) = uc(ci, k2) * fi;
    }
    for (int j = 0; j < b.size(); ++j) {
      const int cj = cls2[j];
      u(a.size(), j) = uc(k1, cj) * atom_weight(b.element(j), cfg.weight_mode)
                       / sb.weight(cj, cfg.weight_mode);
    }
    u(a.size(), b.size()) = uc(k1, k2);
    result.plan = { std::move(u), cs.sol.cost };
  } else {
    const Eigen::MatrixXd cost = augmented_cost(build_costs(a, b));
    const auto y1 = augmented_marginal(a, b, cfg.weight_mode);
    const auto y2 = augmented_marginal(b, a, cfg.weight_mode);
    transport::Solution sol = transport::solve(cost, y1, y2);
    result.plan = { std::move(sol.plan), sol.cost };
  }

  result.distance = result.plan.cost;
  if (cfg.normalize)
    result.distance /= total1 + total2;
  return result;
}

DistanceVector distance_vector(const OtSignature &a, const OtSignature &b) {
  const Eigen::MatrixXd cost = class_cost(a, b);
  const ClassSolution unit = solve_classes(a, b, cost, WeightMode::kUnit);
  const ClassSolution mass = solve_classes(a, b, cost, WeightMode::kMass);
  return { unit.sol.cost, unit.sol.cost / (unit.total1 + unit.total2),
           mass.sol.cost, mass.sol.cost / (mass.total1 + mass.total2) };
}

DistanceVector distance_vector(const Molecule &m1, const Molecule &m2) {
  return distance_vector(OtSignature(m1), OtSignature(m2));
}

}  // namespace molbo
