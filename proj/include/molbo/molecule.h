//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_MOLECULE_H_
#define MOLBO_MOLECULE_H_

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "molbo/element.h"

namespace molbo {

struct Bond {
  int begin;
  int end;
  BondOrder order;
};

struct Neighbor {
  int atom;
  int bond;
  BondOrder order;
};

/// Labeled molecular graph. Immutable once constructed; every constructor
/// validates indices, duplicate bonds, connectivity and valence, and computes
/// the canonical ranking of the heavy atoms.
///
/// Hydrogens may be present as explicit atoms (see add_explicit_hydrogens())
/// or left implicit. The canonical form only describes the heavy-atom graph,
/// so both representations of the same structure compare equal.
class Molecule {
public:
  /// Throws Error(kValenceExceeded) when an atom's bond sum exceeds its
  /// largest admissible valence, Error(kMultiFragmentInput) for disconnected
  /// graphs and Error(kInvalidStructure) for malformed bond lists or
  /// molecules without heavy atoms.
  Molecule(std::vector<Element> atoms, std::vector<Bond> bonds);

  int size() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  int heavy_atom_count() const { return heavy_count_; }

  Element element(int atom) const { return atoms_[atom]; }
  std::span<const Element> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }

  std::span<const Neighbor> neighbors(int atom) const {
    return { adjacency_.data() + offsets_[atom],
             adjacency_.data() + offsets_[atom + 1] };
  }

  int degree(int atom) const { return offsets_[atom + 1] - offsets_[atom]; }
  int heavy_degree(int atom) const;

  /// Number of hydrogens still needed to reach the atom's fill valence.
  int implicit_hydrogens(int atom) const { return implicit_h_[atom]; }
  int total_hydrogens(int atom) const;
  bool is_aromatic(int atom) const;

  bool hydrogen_expanded() const;

  /// Canonical rank of each atom; hydrogens are ranked -1.
  std::span<const int> canonical_ranks() const { return ranks_; }
  const std::string &canonical_form() const { return canonical_; }

  friend bool operator==(const Molecule &a, const Molecule &b) {
    return a.canonical_ == b.canonical_;
  }

private:
  friend Molecule add_explicit_hydrogens(const Molecule &mol);

  struct Precomputed {
    std::vector<int> ranks;
    std::string canonical;
  };
  Molecule(std::vector<Element> atoms, std::vector<Bond> bonds,
           Precomputed canonical);

  void build_graph();

  std::vector<Element> atoms_;
  std::vector<Bond> bonds_;
  std::vector<int> offsets_;
  std::vector<Neighbor> adjacency_;
  std::vector<int> implicit_h_;
  std::vector<int> ranks_;
  std::string canonical_;
  int heavy_count_ = 0;
};

/// Appends one explicit hydrogen per unit of free valence, each
/// single-bonded to its parent atom. Idempotent.
Molecule add_explicit_hydrogens(const Molecule &mol);

/// Drops explicit hydrogen atoms. The result has the same canonical form.
Molecule heavy_skeleton(const Molecule &mol);

enum class WeightMode : std::uint8_t {
  kUnit,
  kMass,
};

double atom_weight(Element element, WeightMode mode);

/// Sum of atom weights over the explicit atoms of `mol`.
double total_weight(const Molecule &mol, WeightMode mode);

/// Molecular mass including implicit hydrogens.
double molecular_mass(const Molecule &mol);

struct BondProfileEntry {
  BondOrder order;
  Element lo;
  Element hi;

  auto operator<=>(const BondProfileEntry &) const = default;
};

/// Sorted multiset of (bond order, sorted endpoint elements) over the bonds
/// incident to an atom.
struct BondProfile {
  std::vector<BondProfileEntry> entries;

  bool operator==(const BondProfile &) const = default;
  auto operator<=>(const BondProfile &) const = default;
};

BondProfile bond_profile(const Molecule &mol, int atom);

/// Multiset intersection and union sizes (min/max of multiplicities).
std::size_t profile_intersection_size(const BondProfile &a,
                                      const BondProfile &b);
std::size_t profile_union_size(const BondProfile &a, const BondProfile &b);

namespace internal {
// Canonical atom ranking over the heavy-atom subgraph. Defined in
// canonical.cpp.
std::vector<int> compute_canonical_ranks(const Molecule &mol);
// Defined in smiles.cpp.
std::string write_smiles_ranked(const Molecule &mol, std::span<const int> ranks);
}  // namespace internal

}  // namespace molbo

#endif  // MOLBO_MOLECULE_H_
