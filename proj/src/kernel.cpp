//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/kernel.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "molbo/error.h"
#include "molbo/parallel.h"

namespace molbo {
namespace {
double exp_sum(const std::array<double, 4> &betas, const DistanceVector &d) {
  double s = 0;
  for (int i = 0; i < 4; ++i)
    s += betas[i] * d[i];
  return std::exp(-s);
}

DistanceVector distances_between(const Molecule &x, const Molecule &y) {
  // Isomorphic molecules are at distance zero; skipping the solve keeps
  // k(x, x) exactly 1.
  if (x.canonical_form() == y.canonical_form())
    return { 0, 0, 0, 0 };
  return distance_vector(x, y);
}

template <class... Ts>
struct Overloaded: Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;
}  // namespace

KernelFamily kernel_family(const KernelSpec &spec) {
  return std::visit(Overloaded {
                        [](const TanimotoKernel &) { return KernelFamily::kFingerprint; },
                        [](const OtExpSumKernel &) { return KernelFamily::kOt; },
                        [](const SumKernel &) { return KernelFamily::kSum; },
                    },
                    spec);
}

std::string_view kernel_family_name(KernelFamily family) {
  switch (family) {
  case KernelFamily::kFingerprint:
    return "fingerprint";
  case KernelFamily::kOt:
    return "ot";
  case KernelFamily::kSum:
    return "sum";
  }
  return "?";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "fingerprint")
    return KernelFamily::kFingerprint;
  if (name == "ot")
    return KernelFamily::kOt;
  if (name == "sum")
    return KernelFamily::kSum;
  throw Error(ErrorCode::kInvalidConfig,
              "kernel: expected fingerprint, ot or sum, got '" + std::string(name)
                  + "'");
}

KernelSpec default_kernel(KernelFamily family, FingerprintParams fp) {
  switch (family) {
  case KernelFamily::kFingerprint:
    return TanimotoKernel { fp };
  case KernelFamily::kOt:
    return OtExpSumKernel {};
  case KernelFamily::kSum:
    return SumKernel { 1.0, 1.0, fp, { 1.0, 1.0, 1.0, 1.0 } };
  }
  return OtExpSumKernel {};
}

void validate(const KernelSpec &spec) {
  auto check_betas = [](const std::array<double, 4> &b) {
    for (double x: b) {
      if (!(x >= 0) || !std::isfinite(x))
        throw Error(ErrorCode::kInvalidConfig, "kernel: betas must be >= 0");
    }
  };
  std::visit(Overloaded {
                 [](const TanimotoKernel &) { },
                 [&](const OtExpSumKernel &k) { check_betas(k.betas); },
                 [&](const SumKernel &k) {
                   check_betas(k.betas);
                   for (double a: { k.alpha1, k.alpha2 }) {
                     if (!(a >= 0 && a <= 10))
                       throw Error(ErrorCode::kInvalidConfig,
                                   "kernel: alphas must lie in [0, 10]");
                   }
                 },
             },
             spec);
}

double kernel_value(const Molecule &x, const Molecule &y, const KernelSpec &spec) {
  return std::visit(
      Overloaded {
          [&](const TanimotoKernel &k) {
            return tanimoto(path_fingerprint(x, k.fp), path_fingerprint(y, k.fp));
          },
          [&](const OtExpSumKernel &k) {
            return exp_sum(k.betas, distances_between(x, y));
          },
          [&](const SumKernel &k) {
            const double fp =
                tanimoto(path_fingerprint(x, k.fp), path_fingerprint(y, k.fp));
            return k.alpha1 * fp + k.alpha2 * exp_sum(k.betas, distances_between(x, y));
          },
      },
      spec);
}

GramMatrix gram(std::span<const Molecule> mols, const KernelSpec &spec) {
  validate(spec);
  SimilarityCache cache(std::holds_alternative<OtExpSumKernel>(spec)
                            ? FingerprintParams {}
                        : std::holds_alternative<TanimotoKernel>(spec)
                            ? std::get<TanimotoKernel>(spec).fp
                            : std::get<SumKernel>(spec).fp);
  std::vector<int> ids;
  ids.reserve(mols.size());
  for (const Molecule &m: mols)
    ids.push_back(cache.intern(m));
  GramMatrix g { cache.kernel_matrix(ids, ids, spec), false };
  // Force exact symmetry regardless of evaluation order.
  g.values = 0.5 * (g.values + g.values.transpose()).eval();
  return g;
}

GramMatrix psd_project(const GramMatrix &g, double floor) {
  if (g.values.rows() != g.values.cols())
    throw Error(ErrorCode::kLengthMismatch, "psd_project: matrix is not square");
  if (!(floor >= 0))
    throw Error(ErrorCode::kInvalidConfig, "psd_project: floor must be >= 0");
  const Eigen::MatrixXd sym = 0.5 * (g.values + g.values.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::kEigenFailure, "psd_project: eigendecomposition failed");
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.size() > 0 && ev.minCoeff() >= floor)
    return { sym, true };
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    ev[i] = std::max(ev[i], floor);
  const Eigen::MatrixXd &v = es.eigenvectors();
  Eigen::MatrixXd out = v * ev.asDiagonal() * v.transpose();
  out = 0.5 * (out + out.transpose()).eval();
  return { std::move(out), true };
}

Eigen::MatrixXd kernel_block(const PairwiseBlock &block, const KernelSpec &spec) {
  auto ot = [&](const std::array<double, 4> &betas) {
    const Eigen::MatrixXd s = betas[0] * block.distances[0]
                              + betas[1] * block.distances[1]
                              + betas[2] * block.distances[2]
                              + betas[3] * block.distances[3];
    return Eigen::MatrixXd((-s.array()).exp());
  };
  return std::visit(Overloaded {
                        [&](const TanimotoKernel &) { return block.tanimoto; },
                        [&](const OtExpSumKernel &k) { return ot(k.betas); },
                        [&](const SumKernel &k) {
                          return Eigen::MatrixXd(k.alpha1 * block.tanimoto
                                                 + k.alpha2 * ot(k.betas));
                        },
                    },
                    spec);
}

SimilarityCache::SimilarityCache(FingerprintParams fp): fp_(fp) { }

int SimilarityCache::intern(const Molecule &mol) {
  auto it = index_.find(mol.canonical_form());
  if (it != index_.end())
    return it->second;
  const int id = size();
  entries_.push_back(std::make_unique<Entry>(Entry { mol, nullptr, nullptr }));
  index_.emplace(mol.canonical_form(), id);
  return id;
}

std::uint64_t SimilarityCache::pair_key(int a, int b) {
  if (a > b)
    std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

const Fingerprint &SimilarityCache::fingerprint(int id) {
  Entry &e = *entries_[id];
  if (!e.fp)
    e.fp = std::make_unique<Fingerprint>(path_fingerprint(e.mol, fp_));
  return *e.fp;
}

const OtSignature &SimilarityCache::signature(int id) {
  Entry &e = *entries_[id];
  if (!e.sig)
    e.sig = std::make_unique<OtSignature>(e.mol);
  return *e.sig;
}

double SimilarityCache::tanimoto(int a, int b) {
  return molbo::tanimoto(fingerprint(a), fingerprint(b));
}

const DistanceVector &SimilarityCache::distances(int a, int b) {
  const std::uint64_t key = pair_key(a, b);
  auto it = distances_.find(key);
  if (it != distances_.end())
    return it->second;
  DistanceVector d { 0, 0, 0, 0 };
  if (a != b)
    d = distance_vector(signature(std::min(a, b)), signature(std::max(a, b)));
  return distances_.emplace(key, d).first->second;
}

void SimilarityCache::prefetch_distances(std::span<const int> rows,
                                         std::span<const int> cols) {
  std::vector<std::pair<int, int>> missing;
  for (int a: rows) {
    for (int b: cols) {
      if (a == b)
        continue;
      if (distances_.count(pair_key(a, b)))
        continue;
      missing.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  if (missing.empty())
    return;
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  for (const auto &[a, b]: missing) {
    signature(a);
    signature(b);
  }
  std::vector<DistanceVector> out(missing.size());
  parallel_for(missing.size(), [&](std::size_t i) {
    out[i] = distance_vector(*entries_[missing[i].first]->sig,
                             *entries_[missing[i].second]->sig);
  });
  for (std::size_t i = 0; i < missing.size(); ++i)
    distances_.emplace(pair_key(missing[i].first, missing[i].second), out[i]);
}

PairwiseBlock SimilarityCache::block(std::span<const int> rows,
                                     std::span<const int> cols, bool need_fp,
                                     bool need_ot) {
  const Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = static_cast<Eigen::Index>(cols.size());
  PairwiseBlock out;
  if (need_fp) {
    out.tanimoto.resize(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index j = 0; j < c; ++j)
        out.tanimoto(i, j) = tanimoto(rows[i], cols[j]);
  }
  if (need_ot) {
    prefetch_distances(rows, cols);
    for (auto &m: out.distances)
      m.resize(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) {
        const DistanceVector &d = distances(rows[i], cols[j]);
        for (int k = 0; k < 4; ++k)
          out.distances[k](i, j) = d[k];
      }
    }
  }
  return out;
}

PairwiseBlock SimilarityCache::block(std::span<const int> rows,
                                     std::span<const int> cols,
                                     KernelFamily family) {
  return block(rows, cols, family != KernelFamily::kOt,
               family != KernelFamily::kFingerprint);
}

Eigen::MatrixXd SimilarityCache::kernel_matrix(std::span<const int> rows,
                                               std::span<const int> cols,
                                               const KernelSpec &spec) {
  auto check_fp = [&](const FingerprintParams &p) {
    if (!(p == fp_))
      throw Error(ErrorCode::kInvalidConfig,
                  "kernel: fingerprint parameters differ from the cache's");
  };
  if (const auto *t = std::get_if<TanimotoKernel>(&spec))
    check_fp(t->fp);
  if (const auto *s = std::get_if<SumKernel>(&spec))
    check_fp(s->fp);
  return kernel_block(block(rows, cols, kernel_family(spec)), spec);
}

}  // namespace molbo
