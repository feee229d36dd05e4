//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_TRANSPORT_H_
#define MOLBO_TRANSPORT_H_

#include <span>

#include <Eigen/Core>

namespace molbo::transport {

struct Solution {
  double cost = 0;
  Eigen::MatrixXd plan;
  int pivots = 0;
};

/// Exact solver for the balanced transportation problem
///
///   min <U, cost>  s.t.  U 1 = supply,  U^T 1 = demand,  U >= 0
///
/// by the primal network simplex method (block-search pricing, strongly
/// feasible spanning trees, big-M artificial start). Supplies and demands
/// must be nonnegative with equal totals up to a relative 1e-9.
///
/// Throws Error(kSolverFailure) on inconsistent input or if the pivot limit
/// is exhausted.
Solution solve(const Eigen::MatrixXd &cost, std::span<const double> supply,
               std::span<const double> demand);

}  // namespace molbo::transport

#endif  // MOLBO_TRANSPORT_H_
