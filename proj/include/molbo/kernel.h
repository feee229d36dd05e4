//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_KERNEL_H_
#define MOLBO_KERNEL_H_

#include <array>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "molbo/fingerprint.h"
#include "molbo/molecule.h"
#include "molbo/otdist.h"

namespace molbo {

struct TanimotoKernel {
  FingerprintParams fp;
};

/// exp(-sum_i beta_i d_i) over the four distance variants.
struct OtExpSumKernel {
  std::array<double, 4> betas { 1.0, 1.0, 1.0, 1.0 };
};

/// alpha1 * Tanimoto + alpha2 * OtExpSum.
struct SumKernel {
  double alpha1 = 1.0;
  double alpha2 = 1.0;
  FingerprintParams fp;
  std::array<double, 4> betas { 1.0, 1.0, 1.0, 1.0 };
};

using KernelSpec = std::variant<TanimotoKernel, OtExpSumKernel, SumKernel>;

enum class KernelFamily : std::uint8_t { kFingerprint, kOt, kSum };

KernelFamily kernel_family(const KernelSpec &spec);
std::string_view kernel_family_name(KernelFamily family);
/// Accepts "fingerprint", "ot" and "sum". Throws kInvalidConfig.
KernelFamily parse_kernel_family(std::string_view name);
KernelSpec default_kernel(KernelFamily family, FingerprintParams fp = {});

/// Throws kInvalidConfig unless betas >= 0 and alphas lie in [0, 10].
void validate(const KernelSpec &spec);

double kernel_value(const Molecule &x, const Molecule &y, const KernelSpec &spec);

struct GramMatrix {
  Eigen::MatrixXd values;
  bool psd_projected = false;
};

/// Pairwise kernel values; the upper triangle is computed concurrently.
GramMatrix gram(std::span<const Molecule> mols, const KernelSpec &spec);

/// Clamps eigenvalues below `floor` up to `floor`. Throws kEigenFailure.
GramMatrix psd_project(const GramMatrix &g, double floor = 1e-10);

/// Raw similarity data for a block of molecule pairs. Kernels of any spec in
/// a family are cheap closed-form functions of it, which is what makes
/// repeated evaluation during hyperparameter search affordable.
struct PairwiseBlock {
  Eigen::MatrixXd tanimoto;
  std::array<Eigen::MatrixXd, 4> distances;
};

/// Kernel values from precomputed pairwise data.
Eigen::MatrixXd kernel_block(const PairwiseBlock &block, const KernelSpec &spec);

/// Interns molecules by canonical form and memoizes fingerprints, OT
/// signatures and pairwise distance vectors. Not thread-safe for concurrent
/// callers; parallelism happens inside.
class SimilarityCache {
public:
  explicit SimilarityCache(FingerprintParams fp = {});

  /// Id of the molecule; equal canonical forms share an id.
  int intern(const Molecule &mol);
  int size() const { return static_cast<int>(entries_.size()); }
  const Molecule &molecule(int id) const { return entries_[id]->mol; }

  double tanimoto(int a, int b);
  const DistanceVector &distances(int a, int b);

  /// Fills `rows` x `cols` data, computing missing OT distances in parallel.
  /// `need_ot` / `need_fp` skip parts unused by the kernel family.
  PairwiseBlock block(std::span<const int> rows, std::span<const int> cols,
                      bool need_fp, bool need_ot);
  PairwiseBlock block(std::span<const int> rows, std::span<const int> cols,
                      KernelFamily family);

  Eigen::MatrixXd kernel_matrix(std::span<const int> rows,
                                std::span<const int> cols, const KernelSpec &spec);

  const FingerprintParams &fingerprint_params() const { return fp_; }

private:
  struct Entry {
    Molecule mol;
    std::unique_ptr<Fingerprint> fp;
    std::unique_ptr<OtSignature> sig;
  };
  static std::uint64_t pair_key(int a, int b);
  const Fingerprint &fingerprint(int id);
  const OtSignature &signature(int id);
  void prefetch_distances(std::span<const int> rows, std::span<const int> cols);

  FingerprintParams fp_;
  std::vector<std::unique_ptr<Entry>> entries_;
  std::map<std::string, int, std::less<>> index_;
  std::unordered_map<std::uint64_t, DistanceVector> distances_;
};

}  // namespace molbo

#endif  // MOLBO_KERNEL_H_
