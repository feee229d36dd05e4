//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/rings.h"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <utility>

namespace molbo {
namespace {
using EdgeSet = std::vector<std::uint64_t>;

struct Candidate {
  EdgeSet edges;
  int length;
  std::vector<int> sorted_ranks;  // tie-break key
};

bool test_bit(const EdgeSet &s, int i) { return (s[i / 64] >> (i % 64)) & 1U; }
void flip_bit(EdgeSet &s, int i) { s[i / 64] ^= std::uint64_t { 1 } << (i % 64); }

// BFS tree from `root` over heavy atoms: parent atom and parent bond.
void bfs(const Molecule &mol, const std::vector<bool> &heavy, int root,
         std::vector<int> &dist, std::vector<int> &parent, std::vector<int> &pbond) {
  const int n = mol.size();
  dist.assign(n, -1);
  parent.assign(n, -1);
  pbond.assign(n, -1);
  std::deque<int> q { root };
  dist[root] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (const Neighbor &nb: mol.neighbors(u)) {
      if (!heavy[nb.atom] || dist[nb.atom] >= 0)
        continue;
      dist[nb.atom] = dist[u] + 1;
      parent[nb.atom] = u;
      pbond[nb.atom] = nb.bond;
      q.push_back(nb.atom);
    }
  }
}

Ring edges_to_ring(const Molecule &mol, const EdgeSet &edges) {
  std::map<int, std::vector<int>> adj;
  for (int b = 0; b < mol.num_bonds(); ++b) {
    if (test_bit(edges, b)) {
      adj[mol.bonds()[b].begin].push_back(mol.bonds()[b].end);
      adj[mol.bonds()[b].end].push_back(mol.bonds()[b].begin);
    }
  }
  Ring ring;
  if (adj.empty())
    return ring;
  int prev = -1, cur = adj.begin()->first;
  const int start = cur;
  do {
    ring.push_back(cur);
    const auto &nb = adj[cur];
    const int next = nb[0] != prev ? nb[0] : nb[1];
    prev = cur;
    cur = next;
  } while (cur != start && static_cast<int>(ring.size()) <= mol.size());
  return ring;
}
}  // namespace

std::vector<Ring> smallest_cycle_basis(const Molecule &mol) {
  const int n = mol.size();
  const int m = mol.num_bonds();
  std::vector<bool> heavy(n);
  int heavy_atoms = 0, heavy_bonds = 0;
  for (int i = 0; i < n; ++i) {
    heavy[i] = mol.element(i) != Element::kH;
    heavy_atoms += heavy[i];
  }
  for (const Bond &b: mol.bonds())
    heavy_bonds += heavy[b.begin] && heavy[b.end];
  const int cyclomatic = heavy_bonds - heavy_atoms + 1;
  if (cyclomatic <= 0)
    return {};

  const auto ranks = mol.canonical_ranks();
  const std::size_t words = static_cast<std::size_t>((m + 63) / 64);
  std::vector<Candidate> cands;
  std::vector<int> dist, parent, pbond;
  for (int v = 0; v < n; ++v) {
    if (!heavy[v])
      continue;
    bfs(mol, heavy, v, dist, parent, pbond);
    for (int e = 0; e < m; ++e) {
      const Bond &b = mol.bonds()[e];
      if (!heavy[b.begin] || !heavy[b.end] || dist[b.begin] < 0)
        continue;
      // Paths v..x and v..y must only share v.
      std::vector<int> px, py;
      for (int a = b.begin; a != v; a = parent[a])
        px.push_back(a);
      for (int a = b.end; a != v; a = parent[a])
        py.push_back(a);
      bool disjoint = true;
      for (int a: px) {
        if (std::find(py.begin(), py.end(), a) != py.end())
          disjoint = false;
      }
      if (!disjoint || pbond[b.begin] == e || pbond[b.end] == e)
        continue;
      Candidate c { EdgeSet(words, 0), 0, {} };
      flip_bit(c.edges, e);
      for (int a: px)
        flip_bit(c.edges, pbond[a]);
      for (int a: py)
        flip_bit(c.edges, pbond[a]);
      c.length = static_cast<int>(px.size() + py.size()) + 1;
      std::vector<int> atoms = px;
      atoms.insert(atoms.end(), py.begin(), py.end());
      atoms.push_back(v);
      for (int a: atoms)
        c.sorted_ranks.push_back(ranks[a]);
      std::sort(c.sorted_ranks.begin(), c.sorted_ranks.end());
      cands.push_back(std::move(c));
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate &a, const Candidate &b) {
    if (a.length != b.length)
      return a.length < b.length;
    return a.sorted_ranks < b.sorted_ranks;
  });

  // Greedy independence test by incremental GF(2) elimination.
  std::vector<std::pair<int, EdgeSet>> pivots;  // (pivot bit, reduced row)
  std::vector<Ring> basis;
  for (const Candidate &c: cands) {
    EdgeSet row = c.edges;
    for (const auto &[bit, prow]: pivots) {
      if (test_bit(row, bit)) {
        for (std::size_t w = 0; w < words; ++w)
          row[w] ^= prow[w];
      }
    }
    int lead = -1;
    for (int e = 0; e < m && lead < 0; ++e) {
      if (test_bit(row, e))
        lead = e;
    }
    if (lead < 0)
      continue;
    pivots.emplace_back(lead, std::move(row));
    basis.push_back(edges_to_ring(mol, c.edges));
    if (static_cast<int>(basis.size()) == cyclomatic)
      break;
  }
  return basis;
}

}  // namespace molbo
