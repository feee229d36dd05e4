//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/molecule.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "molbo/error.h"

namespace molbo {
namespace {
int fill_valence(Element e, int bond_sum) {
  for (int v: element_info(e).allowed_valences) {
    if (v >= bond_sum)
      return v;
  }
  return -1;
}
}  // namespace

Molecule::Molecule(std::vector<Element> atoms, std::vector<Bond> bonds)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)) {
  build_graph();
  ranks_ = internal::compute_canonical_ranks(*this);
  canonical_ = internal::write_smiles_ranked(*this, ranks_);
}

Molecule::Molecule(std::vector<Element> atoms, std::vector<Bond> bonds,
                   Precomputed canonical)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)),
      ranks_(std::move(canonical.ranks)),
      canonical_(std::move(canonical.canonical)) {
  build_graph();
}

void Molecule::build_graph() {
  const int n = size();
  for (Bond &b: bonds_) {
    if (b.begin < 0 || b.end < 0 || b.begin >= n || b.end >= n)
      throw Error(ErrorCode::kInvalidStructure, "bond endpoint out of range");
    if (b.begin == b.end)
      throw Error(ErrorCode::kInvalidStructure, "bond to self");
    if (b.begin > b.end)
      std::swap(b.begin, b.end);
  }

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(bonds_.size());
  for (const Bond &b: bonds_)
    pairs.emplace_back(b.begin, b.end);
  std::sort(pairs.begin(), pairs.end());
  if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end())
    throw Error(ErrorCode::kInvalidStructure, "duplicate bond");

  offsets_.assign(n + 1, 0);
  for (const Bond &b: bonds_) {
    ++offsets_[b.begin + 1];
    ++offsets_[b.end + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  adjacency_.resize(2 * bonds_.size());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (int i = 0; i < num_bonds(); ++i) {
    const Bond &b = bonds_[i];
    adjacency_[fill[b.begin]++] = { b.end, i, b.order };
    adjacency_[fill[b.end]++] = { b.begin, i, b.order };
  }
  for (int i = 0; i < n; ++i) {
    std::sort(adjacency_.begin() + offsets_[i],
              adjacency_.begin() + offsets_[i + 1],
              [](const Neighbor &a, const Neighbor &b) {
                return a.atom < b.atom;
              });
  }

  heavy_count_ = 0;
  for (Element e: atoms_) {
    if (e != Element::kH)
      ++heavy_count_;
  }
  if (heavy_count_ == 0)
    throw Error(ErrorCode::kInvalidStructure, "molecule has no heavy atoms");

  implicit_h_.resize(n);
  for (int i = 0; i < n; ++i) {
    int sum_x2 = 0;
    for (const Neighbor &nb: neighbors(i))
      sum_x2 += valence_contribution_x2(nb.order);
    const int bond_sum = sum_x2 / 2;
    const int target = fill_valence(atoms_[i], bond_sum);
    if (target < 0) {
      throw Error(ErrorCode::kValenceExceeded,
                  "atom " + std::to_string(i) + " ("
                      + std::string(symbol(atoms_[i])) + ") has bond sum "
                      + std::to_string(bond_sum));
    }
    implicit_h_[i] = target - bond_sum;
  }

  // Connectivity
  std::vector<char> seen(n, 0);
  std::vector<int> stack = { 0 };
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const Neighbor &nb: neighbors(u)) {
      if (!seen[nb.atom]) {
        seen[nb.atom] = 1;
        ++reached;
        stack.push_back(nb.atom);
      }
    }
  }
  if (reached != n)
    throw Error(ErrorCode::kMultiFragmentInput, "molecule graph is disconnected");
}

int Molecule::heavy_degree(int atom) const {
  int d = 0;
  for (const Neighbor &nb: neighbors(atom)) {
    if (atoms_[nb.atom] != Element::kH)
      ++d;
  }
  return d;
}

int Molecule::total_hydrogens(int atom) const {
  return implicit_h_[atom] + degree(atom) - heavy_degree(atom);
}

bool Molecule::is_aromatic(int atom) const {
  return std::any_of(neighbors(atom).begin(), neighbors(atom).end(),
                     [](const Neighbor &nb) {
                       return nb.order == BondOrder::kAromatic;
                     });
}

bool Molecule::hydrogen_expanded() const {
  return std::all_of(implicit_h_.begin(), implicit_h_.end(),
                     [](int h) { return h == 0; });
}

Molecule add_explicit_hydrogens(const Molecule &mol) {
  if (mol.hydrogen_expanded())
    return mol;

  std::vector<Element> atoms(mol.atoms().begin(), mol.atoms().end());
  std::vector<Bond> bonds(mol.bonds().begin(), mol.bonds().end());
  const int n = mol.size();
  for (int i = 0; i < n; ++i) {
    for (int h = 0; h < mol.implicit_hydrogens(i); ++h) {
      const int idx = static_cast<int>(atoms.size());
      atoms.push_back(Element::kH);
      bonds.push_back({ i, idx, BondOrder::kSingle });
    }
  }

  // Heavy atoms keep their indices, so the canonical data carries over.
  Molecule::Precomputed pre;
  pre.ranks.assign(mol.canonical_ranks().begin(), mol.canonical_ranks().end());
  pre.ranks.resize(atoms.size(), -1);
  pre.canonical = mol.canonical_form();
  return Molecule(std::move(atoms), std::move(bonds), std::move(pre));
}

Molecule heavy_skeleton(const Molecule &mol) {
  if (mol.heavy_atom_count() == mol.size())
    return mol;

  std::vector<int> remap(mol.size(), -1);
  std::vector<Element> atoms;
  for (int i = 0; i < mol.size(); ++i) {
    if (mol.element(i) != Element::kH) {
      remap[i] = static_cast<int>(atoms.size());
      atoms.push_back(mol.element(i));
    }
  }
  std::vector<Bond> bonds;
  for (const Bond &b: mol.bonds()) {
    if (remap[b.begin] >= 0 && remap[b.end] >= 0)
      bonds.push_back({ remap[b.begin], remap[b.end], b.order });
  }
  return Molecule(std::move(atoms), std::move(bonds));
}

double atom_weight(Element element, WeightMode mode) {
  return mode == WeightMode::kUnit ? 1.0 : element_info(element).atomic_mass;
}

namespace {
// Per-element atom counts (implicit hydrogens folded into H on request);
// summing over these keeps derived totals independent of atom numbering.
std::map<Element, int> element_counts(const Molecule &mol, bool implicit_h) {
  std::map<Element, int> counts;
  for (int i = 0; i < mol.size(); ++i) {
    ++counts[mol.element(i)];
    if (implicit_h && mol.implicit_hydrogens(i) > 0)
      counts[Element::kH] += mol.implicit_hydrogens(i);
  }
  return counts;
}
}  // namespace

double total_weight(const Molecule &mol, WeightMode mode) {
  double w = 0;
  for (const auto &[e, n]: element_counts(mol, false))
    w += n * atom_weight(e, mode);
  return w;
}

double molecular_mass(const Molecule &mol) {
  double m = 0;
  for (const auto &[e, n]: element_counts(mol, true))
    m += n * element_info(e).atomic_mass;
  return m;
}

BondProfile bond_profile(const Molecule &mol, int atom) {
  BondProfile profile;
  const Element self = mol.element(atom);
  for (const Neighbor &nb: mol.neighbors(atom)) {
    Element other = mol.element(nb.atom);
    profile.entries.push_back({ nb.order, std::min(self, other),
                                std::max(self, other) });
  }
  std::sort(profile.entries.begin(), profile.entries.end());
  return profile;
}

std::size_t profile_intersection_size(const BondProfile &a,
                                      const BondProfile &b) {
  std::size_t count = 0;
  auto i = a.entries.begin(), j = b.entries.begin();
  while (i != a.entries.end() && j != b.entries.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::size_t profile_union_size(const BondProfile &a, const BondProfile &b) {
  return a.entries.size() + b.entries.size()
         - profile_intersection_size(a, b);
}

}  // namespace molbo
