//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/transport.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "molbo/error.h"

namespace molbo::transport {
namespace {
constexpr int kDirUp = 1;     // tree arc points from node to its parent
constexpr int kDirDown = -1;  // tree arc points from parent to node

class NetworkSimplex {
public:
  NetworkSimplex(const Eigen::MatrixXd &cost, std::span<const double> supply,
                 std::span<const double> demand);

  Solution run();

private:
  int find_entering();
  void pivot(int in_arc);
  void rebuild_tree();

  int rows_, cols_, nodes_, root_;
  int real_arcs_;
  std::vector<int> source_, target_;
  std::vector<double> cost_, flow_;
  std::vector<char> in_tree_;
  std::vector<std::vector<int>> tree_adj_;

  std::vector<int> parent_, pred_, pred_dir_, depth_;
  std::vector<double> pi_;
  std::vector<int> order_;

  int block_size_;
  int next_arc_ = 0;
  double eps_;
};

NetworkSimplex::NetworkSimplex(const Eigen::MatrixXd &cost,
                               std::span<const double> supply,
                               std::span<const double> demand)
    : rows_(static_cast<int>(cost.rows())), cols_(static_cast<int>(cost.cols())),
      nodes_(rows_ + cols_), root_(nodes_), real_arcs_(rows_ * cols_) {
  const int all_arcs = real_arcs_ + nodes_;
  source_.resize(all_arcs);
  target_.resize(all_arcs);
  cost_.resize(all_arcs);
  flow_.assign(all_arcs, 0.0);
  in_tree_.assign(all_arcs, 0);

  double max_cost = 0;
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      const int a = i * cols_ + j;
      source_[a] = i;
      target_[a] = rows_ + j;
      cost_[a] = cost(i, j);
      max_cost = std::max(max_cost, std::abs(cost_[a]));
    }
  }
  const double art_cost = (max_cost + 1) * (nodes_ + 1);
  eps_ = 1e-12 * art_cost;

  tree_adj_.assign(nodes_ + 1, {});
  for (int u = 0; u < nodes_; ++u) {
    const int e = real_arcs_ + u;
    in_tree_[e] = 1;
    if (u < rows_) {
      source_[e] = u;
      target_[e] = root_;
      cost_[e] = 0;
      flow_[e] = supply[u];
    } else {
      source_[e] = root_;
      target_[e] = u;
      cost_[e] = art_cost;
      flow_[e] = demand[u - rows_];
    }
    tree_adj_[u].push_back(e);
    tree_adj_[root_].push_back(e);
  }

  parent_.resize(nodes_ + 1);
  pred_.resize(nodes_ + 1);
  pred_dir_.resize(nodes_ + 1);
  depth_.resize(nodes_ + 1);
  pi_.resize(nodes_ + 1);
  block_size_ = std::max(10, static_cast<int>(std::ceil(std::sqrt(real_arcs_))));
  rebuild_tree();
}

void NetworkSimplex::rebuild_tree() {
  order_.clear();
  order_.push_back(root_);
  parent_[root_] = -1;
  pred_[root_] = -1;
  depth_[root_] = 0;
  pi_[root_] = 0;
  for (std::size_t head = 0; head < order_.size(); ++head) {
    const int u = order_[head];
    for (int e: tree_adj_[u]) {
      if (e == pred_[u])
        continue;
      const int v = source_[e] == u ? target_[e] : source_[e];
      parent_[v] = u;
      pred_[v] = e;
      depth_[v] = depth_[u] + 1;
      if (source_[e] == v) {
        pred_dir_[v] = kDirUp;
        pi_[v] = pi_[u] - cost_[e];
      } else {
        pred_dir_[v] = kDirDown;
        pi_[v] = pi_[u] + cost_[e];
      }
      order_.push_back(v);
    }
  }
}

int NetworkSimplex::find_entering() {
  double best = -eps_;
  int best_arc = -1;
  int checked = 0;
  for (int n = 0; n < real_arcs_; ++n) {
    const int a = next_arc_;
    next_arc_ = next_arc_ + 1 == real_arcs_ ? 0 : next_arc_ + 1;
    if (!in_tree_[a]) {
      const double reduced = cost_[a] + pi_[source_[a]] - pi_[target_[a]];
      if (reduced < best) {
        best = reduced;
        best_arc = a;
      }
    }
    if (++checked == block_size_) {
      if (best_arc >= 0)
        return best_arc;
      checked = 0;
    }
  }
  return best_arc;
}

void NetworkSimplex::pivot(int in_arc) {
  const int first = source_[in_arc];
  const int second = target_[in_arc];

  int u = first, v = second;
  while (u != v) {
    if (depth_[u] >= depth_[v])
      u = parent_[u];
    else
      v = parent_[v];
  }
  const int join = u;

  // Leaving arc: first blocking arc on the source side (strict), last on the
  // target side (non-strict), which keeps the tree strongly feasible.
  double delta = std::numeric_limits<double>::infinity();
  int u_out = -1;
  for (int w = first; w != join; w = parent_[w]) {
    if (pred_dir_[w] == kDirUp && flow_[pred_[w]] < delta) {
      delta = flow_[pred_[w]];
      u_out = w;
    }
  }
  for (int w = second; w != join; w = parent_[w]) {
    if (pred_dir_[w] == kDirDown && flow_[pred_[w]] <= delta) {
      delta = flow_[pred_[w]];
      u_out = w;
    }
  }
  if (u_out < 0)
    throw Error(ErrorCode::kSolverFailure, "unbounded transport problem");

  if (delta > 0) {
    flow_[in_arc] += delta;
    for (int w = first; w != join; w = parent_[w])
      flow_[pred_[w]] -= pred_dir_[w] * delta;
    for (int w = second; w != join; w = parent_[w])
      flow_[pred_[w]] += pred_dir_[w] * delta;
  }

  const int out_arc = pred_[u_out];
  flow_[out_arc] = 0;
  in_tree_[out_arc] = 0;
  in_tree_[in_arc] = 1;
  for (int end: { source_[out_arc], target_[out_arc] }) {
    auto &adj = tree_adj_[end];
    adj.erase(std::find(adj.begin(), adj.end(), out_arc));
  }
  tree_adj_[source_[in_arc]].push_back(in_arc);
  tree_adj_[target_[in_arc]].push_back(in_arc);
  rebuild_tree();
}

Solution NetworkSimplex::run() {
  const long max_pivots = 100L * (real_arcs_ + nodes_) + 1000;
  Solution sol;
  for (;;) {
    const int in_arc = find_entering();
    if (in_arc < 0)
      break;
    pivot(in_arc);
    if (++sol.pivots > max_pivots)
      throw Error(ErrorCode::kSolverFailure, "network simplex pivot limit exceeded");
  }

  double total = 0, residual = 0;
  for (int u = 0; u < nodes_; ++u) {
    total += std::abs(flow_[real_arcs_ + u]) + 1.0;
  }
  for (int u = 0; u < nodes_; ++u)
    residual += std::abs(flow_[real_arcs_ + u]);
  if (residual > 1e-9 * total) {
    throw Error(ErrorCode::kSolverFailure,
                "artificial flow " + std::to_string(residual) + " remains");
  }

  sol.plan.resize(rows_, cols_);
  sol.cost = 0;
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      const int a = i * cols_ + j;
      const double f = std::max(0.0, flow_[a]);
      sol.plan(i, j) = f;
      sol.cost += f * cost_[a];
    }
  }
  return sol;
}
}  // namespace

Solution solve(const Eigen::MatrixXd &cost, std::span<const double> supply,
               std::span<const double> demand) {
  if (static_cast<Eigen::Index>(supply.size()) != cost.rows()
      || static_cast<Eigen::Index>(demand.size()) != cost.cols())
    throw Error(ErrorCode::kSolverFailure, "marginal sizes do not match cost matrix");
  if (cost.rows() == 0 || cost.cols() == 0)
    throw Error(ErrorCode::kSolverFailure, "empty transport problem");
  const double s = std::accumulate(supply.begin(), supply.end(), 0.0);
  const double d = std::accumulate(demand.begin(), demand.end(), 0.0);
  if (std::abs(s - d) > 1e-9 * std::max({ 1.0, s, d }))
    throw Error(ErrorCode::kSolverFailure, "unbalanced transport problem");
  for (double x: supply) {
    if (!(x >= 0))
      throw Error(ErrorCode::kSolverFailure, "negative supply");
  }
  for (double x: demand) {
    if (!(x >= 0))
      throw Error(ErrorCode::kSolverFailure, "negative demand");
  }
  if (!cost.allFinite())
    throw Error(ErrorCode::kSolverFailure, "non-finite cost");

  return NetworkSimplex(cost, supply, demand).run();
}

}  // namespace molbo::transport
