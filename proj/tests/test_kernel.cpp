//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <random>

#include <doctest.h>
#include <Eigen/Eigenvalues>

#include "molbo/error.h"
#include "molbo/kernel.h"
#include "molbo/smiles.h"
#include "test_util.h"

namespace molbo {
namespace {
std::vector<Molecule> corpus_molecules() {
  std::vector<Molecule> out;
  for (const auto &s: testing::corpus_smiles())
    out.push_back(parse_smiles(s));
  return out;
}

double min_eigenvalue(const Eigen::MatrixXd &m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}
}  // namespace

TEST_CASE("kernel: degenerate specs") {
  const Molecule a = parse_smiles("CCO"), b = parse_smiles("c1ccccc1N");
  CHECK(kernel_value(a, a, OtExpSumKernel {}) == 1.0);
  CHECK(kernel_value(a, b, OtExpSumKernel { { 0, 0, 0, 0 } }) == 1.0);
  const SumKernel fp_only { 1.0, 0.0, {}, { 1, 1, 1, 1 } };
  CHECK(kernel_value(a, b, fp_only) == kernel_value(a, b, TanimotoKernel {}));
  CHECK(kernel_value(a, b, OtExpSumKernel {}) < 1.0);
}

TEST_CASE("kernel: values are symmetric and bounded") {
  const auto mols = corpus_molecules();
  const SumKernel sum { 2.0, 3.0, {}, { 0.5, 0.1, 0.2, 1.0 } };
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, mols.size() - 1);
  for (int trial = 0; trial < 40; ++trial) {
    const Molecule &x = mols[pick(rng)], &y = mols[pick(rng)];
    const double ot = kernel_value(x, y, OtExpSumKernel { { 0.5, 0.1, 0.2, 1.0 } });
    CHECK(ot > 0.0);
    CHECK(ot <= 1.0);
    CHECK(ot == doctest::Approx(kernel_value(y, x, OtExpSumKernel { { 0.5, 0.1, 0.2, 1.0 } })));
    const double fp = kernel_value(x, y, TanimotoKernel {});
    CHECK(fp >= 0.0);
    CHECK(fp <= 1.0);
    const double s = kernel_value(x, y, sum);
    CHECK(s >= 0.0);
    CHECK(s <= 5.0 + 1e-12);
    CHECK(s == doctest::Approx(kernel_value(y, x, sum)).epsilon(1e-12));
  }
}

TEST_CASE("kernel: gram matrices") {
  const auto mols = corpus_molecules();
  const GramMatrix one = gram(std::span(mols).first(1), OtExpSumKernel {});
  REQUIRE(one.values.rows() == 1);
  CHECK(one.values(0, 0) == 1.0);

  const std::span<const Molecule> sub = std::span(mols).first(15);
  for (const KernelSpec &spec: { KernelSpec { OtExpSumKernel {} },
                                 KernelSpec { TanimotoKernel {} },
                                 KernelSpec { SumKernel {} } }) {
    const GramMatrix g = gram(sub, spec);
    CHECK((g.values - g.values.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_FALSE(g.psd_projected);
    for (int i = 0; i < 15; ++i) {
      if (std::holds_alternative<OtExpSumKernel>(spec))
        CHECK(g.values(i, i) == 1.0);
      for (int j = 0; j < 15; j += 4)
        CHECK(g.values(i, j) == doctest::Approx(kernel_value(sub[i], sub[j], spec)).epsilon(1e-12));
    }
    const GramMatrix p = psd_project(g);
    CHECK(p.psd_projected);
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n01;
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd z(15);
      for (int i = 0; i < 15; ++i)
        z[i] = n01(rng);
      CHECK(z.dot(p.values * z) >= -1e-6 * z.squaredNorm());
    }
  }
}

TEST_CASE("kernel: psd projection") {
  GramMatrix g { Eigen::MatrixXd(2, 2), false };
  g.values << 1, 2, 2, 1;
  const GramMatrix p = psd_project(g, 0.0);
  // Eigenpairs (3, (1,1)/sqrt2) and (-1, (1,-1)/sqrt2); dropping the
  // negative one leaves 3 * v v^T.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(p.values(i, j) - 1.5) <= 1e-9);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd a(12, 12);
    for (int i = 0; i < 12; ++i)
      for (int j = 0; j < 12; ++j)
        a(i, j) = n01(rng);
    const Eigen::MatrixXd sym = a + a.transpose();
    CHECK(min_eigenvalue(psd_project({ sym, false }, 0.0).values) >= -1e-8);
    const Eigen::MatrixXd psd = a * a.transpose();
    CHECK((psd_project({ psd, false }, 0.0).values - psd).norm() <= 1e-9);
  }
  CHECK_THROWS_AS(psd_project({ Eigen::MatrixXd(2, 3), false }), Error);
}

TEST_CASE("kernel: similarity cache") {
  const auto mols = corpus_molecules();
  SimilarityCache cache;
  std::vector<int> ids;
  for (const auto &m: mols)
    ids.push_back(cache.intern(m));
  CHECK(cache.intern(parse_smiles(testing::corpus_smiles()[3])) == ids[3]);
  const DistanceVector d = cache.distances(ids[1], ids[7]);
  const DistanceVector ref = distance_vector(mols[1], mols[7]);
  for (int k = 0; k < 4; ++k)
    CHECK(d[k] == doctest::Approx(ref[k]).epsilon(1e-12));
  const SumKernel spec { 0.7, 1.3, {}, { 0.2, 0.4, 0.01, 2.0 } };
  const std::vector<int> rows(ids.begin(), ids.begin() + 6);
  const std::vector<int> cols(ids.begin() + 4, ids.begin() + 12);
  const Eigen::MatrixXd k = cache.kernel_matrix(rows, cols, spec);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 8; ++j)
      CHECK(k(i, j) == doctest::Approx(kernel_value(mols[i], mols[4 + j], spec)).epsilon(1e-12));
  CHECK_THROWS_AS(cache.kernel_matrix(rows, cols, TanimotoKernel { { 1024, 7 } }), Error);
}

TEST_CASE("kernel: spec validation and families") {
  CHECK_THROWS_AS(validate(OtExpSumKernel { { -1, 0, 0, 0 } }), Error);
  CHECK_THROWS_AS(validate(SumKernel { 11.0, 1.0, {}, { 0, 0, 0, 0 } }), Error);
  CHECK_NOTHROW(validate(SumKernel { 0.0, 10.0, {}, { 0, 0, 0, 0 } }));
  CHECK(parse_kernel_family("ot") == KernelFamily::kOt);
  CHECK(kernel_family(default_kernel(KernelFamily::kSum)) == KernelFamily::kSum);
  CHECK_THROWS_AS(parse_kernel_family("rbf"), Error);
}
}  // namespace molbo
