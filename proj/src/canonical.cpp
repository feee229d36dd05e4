//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Morgan-style canonical ranking of heavy atoms. Atoms start out classified by
// (element, heavy degree, incident bond orders); classes are refined by the
// sorted multiset of (bond order, neighbor class) until stable. Remaining ties
// are broken by promoting the lowest-index atom of the first tied class and
// refining again. The ranking is exact whenever tied atoms are related by a
// graph automorphism, which covers the graphs the parser produces.

#include <algorithm>
#include <numeric>
#include <tuple>
#include <vector>

#include "molbo/molecule.h"

namespace molbo::internal {
namespace {
using Key = std::vector<int>;

// Replaces `ranks` with dense class indices ordered by `keys`. Returns the
// number of classes.
int rank_by_keys(const std::vector<int> &atoms, const std::vector<Key> &keys,
                 std::vector<int> &ranks) {
  std::vector<int> order(atoms.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return keys[a] < keys[b]; });
  int cls = -1;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k == 0 || keys[order[k]] != keys[order[k - 1]])
      ++cls;
    ranks[atoms[order[k]]] = cls;
  }
  return cls + 1;
}

int refine(const Molecule &mol, const std::vector<int> &atoms,
           std::vector<int> &ranks, int num_classes) {
  std::vector<Key> keys(atoms.size());
  while (true) {
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const int a = atoms[k];
      std::vector<std::pair<int, int>> env;
      for (const Neighbor &nb: mol.neighbors(a)) {
        if (ranks[nb.atom] >= 0)
          env.emplace_back(ranks[nb.atom], static_cast<int>(nb.order));
      }
      std::sort(env.begin(), env.end());
      Key &key = keys[k];
      key.clear();
      key.push_back(ranks[a]);
      for (auto [r, o]: env) {
        key.push_back(r);
        key.push_back(o);
      }
    }
    const int next = rank_by_keys(atoms, keys, ranks);
    if (next == num_classes)
      return next;
    num_classes = next;
  }
}
}  // namespace

std::vector<int> compute_canonical_ranks(const Molecule &mol) {
  std::vector<int> ranks(mol.size(), -1);
  std::vector<int> atoms;
  for (int i = 0; i < mol.size(); ++i) {
    if (mol.element(i) != Element::kH)
      atoms.push_back(i);
  }

  std::vector<Key> keys(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const int a = atoms[k];
    std::vector<int> orders;
    for (const Neighbor &nb: mol.neighbors(a)) {
      if (mol.element(nb.atom) != Element::kH)
        orders.push_back(static_cast<int>(nb.order));
    }
    std::sort(orders.begin(), orders.end());
    keys[k] = { static_cast<int>(mol.element(a)),
                static_cast<int>(orders.size()) };
    keys[k].insert(keys[k].end(), orders.begin(), orders.end());
  }
  int num_classes = rank_by_keys(atoms, keys, ranks);
  num_classes = refine(mol, atoms, ranks, num_classes);

  const int n = static_cast<int>(atoms.size());
  while (num_classes < n) {
    // First (lowest-ranked) tied class, lowest atom index inside it.
    std::vector<int> count(n, 0);
    for (int a: atoms)
      ++count[ranks[a]];
    int tied = 0;
    while (count[tied] < 2)
      ++tied;
    int chosen = -1;
    for (int a: atoms) {
      if (ranks[a] == tied) {
        chosen = a;
        break;
      }
    }
    for (int a: atoms) {
      ranks[a] = 2 * ranks[a] + (ranks[a] == tied && a != chosen ? 1 : 0);
    }
    for (std::size_t k = 0; k < atoms.size(); ++k)
      keys[k] = { ranks[atoms[k]] };
    num_classes = rank_by_keys(atoms, keys, ranks);
    num_classes = refine(mol, atoms, ranks, num_classes);
  }
  return ranks;
}

}  // namespace molbo::internal
