//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Test-only generic LP solver used as an oracle for the transport code.
// Dense two-phase tableau simplex with Bland's anti-cycling rule:
//
//   min c^T x  s.t.  A x = b,  x >= 0.
//
// Deliberately shares nothing with the network simplex in src/.

#ifndef MOLBO_TESTS_ORACLE_DENSE_LP_H_
#define MOLBO_TESTS_ORACLE_DENSE_LP_H_

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "molbo/otdist.h"

namespace molbo::oracle {

struct LpResult {
  double objective;
  std::vector<double> x;
};

class DenseLp {
public:
  DenseLp(std::vector<std::vector<double>> a, std::vector<double> b,
          std::vector<double> c)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) { }

  LpResult solve() {
    const int m = static_cast<int>(a_.size());
    const int n = static_cast<int>(c_.size());
    for (int i = 0; i < m; ++i) {
      if (b_[i] < 0) {
        for (double &v: a_[i])
          v = -v;
        b_[i] = -b_[i];
      }
    }

    // Tableau columns: n structural, m artificial, then rhs.
    const int cols = n + m + 1;
    t_.assign(m, std::vector<double>(cols, 0.0));
    basis_.assign(m, 0);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j)
        t_[i][j] = a_[i][j];
      t_[i][n + i] = 1.0;
      t_[i][cols - 1] = b_[i];
      basis_[i] = n + i;
    }

    // Phase 1: minimize the sum of artificials.
    std::vector<double> phase1(n + m, 0.0);
    for (int i = 0; i < m; ++i)
      phase1[n + i] = 1.0;
    run(phase1, n + m);
    double infeas = 0;
    for (int i = 0; i < m; ++i) {
      if (basis_[i] >= n)
        infeas += t_[i][cols - 1];
    }
    if (infeas > 1e-7)
      throw std::runtime_error("dense LP infeasible");

    // Drive zero-valued artificials out of the basis or drop redundant rows.
    for (int i = 0; i < static_cast<int>(t_.size());) {
      if (basis_[i] < n) {
        ++i;
        continue;
      }
      int col = -1;
      for (int j = 0; j < n; ++j) {
        if (std::abs(t_[i][j]) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col < 0) {
        t_.erase(t_.begin() + i);
        basis_.erase(basis_.begin() + i);
        continue;
      }
      pivot(i, col);
      ++i;
    }

    // Phase 2 restricted to structural columns.
    std::vector<double> phase2(n + m, 0.0);
    for (int j = 0; j < n; ++j)
      phase2[j] = c_[j];
    run(phase2, n);

    LpResult r { 0.0, std::vector<double>(n, 0.0) };
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (basis_[i] < n)
        r.x[basis_[i]] = t_[i][cols - 1];
    }
    for (int j = 0; j < n; ++j)
      r.objective += c_[j] * r.x[j];
    return r;
  }

private:
  void pivot(int row, int col) {
    const double p = t_[row][col];
    for (double &v: t_[row])
      v /= p;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (static_cast<int>(i) == row)
        continue;
      const double f = t_[i][col];
      if (f == 0.0)
        continue;
      for (std::size_t j = 0; j < t_[i].size(); ++j)
        t_[i][j] -= f * t_[row][j];
    }
    basis_[row] = col;
  }

  // Bland's rule over columns [0, allowed).
  void run(const std::vector<double> &cost, int allowed) {
    const int rhs = static_cast<int>(t_.empty() ? 0 : t_[0].size() - 1);
    for (int iter = 0; iter < 200000; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        double reduced = cost[j];
        for (std::size_t i = 0; i < t_.size(); ++i)
          reduced -= cost[basis_[i]] * t_[i][j];
        if (reduced < -1e-10) {
          enter = j;
          break;
        }
      }
      if (enter < 0)
        return;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < t_.size(); ++i) {
        if (t_[i][enter] > 1e-12) {
          const double ratio = t_[i][rhs] / t_[i][enter];
          if (ratio < best - 1e-12
              || (std::abs(ratio - best) <= 1e-12 && basis_[i] < basis_[leave])) {
            best = ratio;
            leave = static_cast<int>(i);
          }
        }
      }
      if (leave < 0)
        throw std::runtime_error("dense LP unbounded");
      pivot(leave, enter);
    }
    throw std::runtime_error("dense LP iteration limit");
  }

  std::vector<std::vector<double>> a_;
  std::vector<double> b_;
  std::vector<double> c_;
  std::vector<std::vector<double>> t_;
  std::vector<int> basis_;
};

/// The original matching program with inequality marginals and the explicit
/// non-matching term:
///   min <C, U> + sum_i (w1_i - sum_j U_ij) + sum_j (w2_j - sum_i U_ij)
///   s.t. sum_j U_ij <= w1_i, sum_i U_ij <= w2_j, U >= 0,
/// posed with slack variables. Returns the optimal objective including the
/// constant sum(w1) + sum(w2).
inline double inequality_form(const Eigen::MatrixXd &c, const std::vector<double> &w1,
                              const std::vector<double> &w2) {
  const int n1 = static_cast<int>(c.rows()), n2 = static_cast<int>(c.cols());
  const int nu = n1 * n2;
  const int nvar = nu + n1 + n2;
  std::vector<std::vector<double>> a(n1 + n2, std::vector<double>(nvar, 0.0));
  std::vector<double> b(n1 + n2), cost(nvar, 0.0);
  double constant = 0;
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      a[i][i * n2 + j] = 1.0;
      a[n1 + j][i * n2 + j] = 1.0;
      // <C,U> plus the -2 sum U part of the expanded non-matching term.
      cost[i * n2 + j] = c(i, j) - 2.0;
    }
    a[i][nu + i] = 1.0;
    b[i] = w1[i];
    constant += w1[i];
  }
  for (int j = 0; j < n2; ++j) {
    a[n1 + j][nu + n1 + j] = 1.0;
    b[n1 + j] = w2[j];
    constant += w2[j];
  }
  return DenseLp(a, b, cost).solve().objective + constant;
}

/// The augmented equality-constrained transport program.
inline LpResult equality_form(const Eigen::MatrixXd &cprime,
                              const std::vector<double> &y1,
                              const std::vector<double> &y2) {
  const int r = static_cast<int>(cprime.rows()), k = static_cast<int>(cprime.cols());
  std::vector<std::vector<double>> a(r + k, std::vector<double>(r * k, 0.0));
  std::vector<double> b(r + k), cost(r * k);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < k; ++j) {
      a[i][i * k + j] = 1.0;
      a[r + j][i * k + j] = 1.0;
      cost[i * k + j] = cprime(i, j);
    }
    b[i] = y1[i];
  }
  for (int j = 0; j < k; ++j)
    b[r + j] = y2[j];
  return DenseLp(a, b, cost).solve();
}

struct OracleDistances {
  double inequality;
  double equality;
};

/// Both oracle forms for one molecule pair and weight mode, built from the
/// per-atom cost matrices.
inline OracleDistances oracle_ot(const Molecule &m1, const Molecule &m2,
                                 WeightMode mode) {
  const CostMatrices costs = build_costs(m1, m2);
  const Eigen::MatrixXd c = costs.label + costs.structure;
  const Molecule a = add_explicit_hydrogens(m1), b = add_explicit_hydrogens(m2);
  std::vector<double> w1, w2;
  for (Element e: a.atoms())
    w1.push_back(atom_weight(e, mode));
  for (Element e: b.atoms())
    w2.push_back(atom_weight(e, mode));
  double s1 = 0, s2 = 0;
  for (double w: w1)
    s1 += w;
  for (double w: w2)
    s2 += w;

  Eigen::MatrixXd cprime = Eigen::MatrixXd::Ones(c.rows() + 1, c.cols() + 1);
  cprime.topLeftCorner(c.rows(), c.cols()) = c;
  cprime(c.rows(), c.cols()) = 0.0;
  std::vector<double> y1 = w1, y2 = w2;
  y1.push_back(s2);
  y2.push_back(s1);

  return { inequality_form(c, w1, w2), equality_form(cprime, y1, y2).objective };
}

}  // namespace molbo::oracle

#endif  // MOLBO_TESTS_ORACLE_DENSE_LP_H_
