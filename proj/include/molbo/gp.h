//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLBO_GP_H_
#define MOLBO_GP_H_

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "molbo/kernel.h"

namespace molbo {

struct GpHyperparams {
  KernelSpec kernel = OtExpSumKernel {};
  double noise_var = 1e-2;
  double mean_const = 0.0;
  double signal_scale = 1.0;
};

inline constexpr double kMinNoise = 1e-8;
inline constexpr double kMaxNoise = 10.0;
inline constexpr double kMinSignal = 1e-3;
inline constexpr double kMaxSignal = 1e3;
inline constexpr double kMinBeta = 1e-4;
inline constexpr double kMaxBeta = 10.0;
inline constexpr double kMaxAlpha = 10.0;

struct Prediction {
  double mu;
  double var;
};

/// GP over an abstract index set given raw kernel blocks. The training Gram
/// is PSD-projected and scaled: Kt = s^2 PSD(K) + noise I. Cross-covariances
/// use raw kernel values scaled by s^2, except for queries that are training
/// points, which read the projected Gram (see predict_training).
class GpModel {
public:
  /// Throws kCholeskyFailure if Kt is not numerically positive definite.
  GpModel(const Eigen::MatrixXd &k_train, Eigen::VectorXd y, double noise_var,
          double signal_scale, double mean_const);

  /// k_star: raw kernel values between the query and the training points;
  /// k_self: raw k(x, x).
  Prediction predict(const Eigen::VectorXd &k_star, double k_self) const;
  /// Prediction at training point i using row i of PSD(K). An indefinite K
  /// differs from its projection, so raw kernel rows would not interpolate.
  Prediction predict_training(Eigen::Index i) const;

  /// -1/2 r^T Kt^-1 r - 1/2 log det Kt - n/2 log(2 pi), r = y - mean.
  double log_marginal_likelihood() const;

  /// Generalized least squares mean 1^T Kt^-1 y / 1^T Kt^-1 1, i.e. the
  /// mean_const maximizing the marginal likelihood for fixed Kt.
  double profiled_mean() const;

  int size() const { return static_cast<int>(y_.size()); }
  const Eigen::MatrixXd &chol_factor() const { return l_; }
  const Eigen::VectorXd &alpha() const { return alpha_; }
  const Eigen::MatrixXd &scaled_gram() const { return k_tilde_; }

private:
  Eigen::VectorXd y_;
  double noise_var_;
  double signal_var_;
  double mean_;
  Eigen::MatrixXd projected_;
  Eigen::MatrixXd k_tilde_;
  Eigen::MatrixXd l_;
  Eigen::VectorXd alpha_;
};

double log_marginal_likelihood(std::span<const Molecule> mols,
                               std::span<const double> ys,
                               const GpHyperparams &hyper);

struct FitOptions {
  int random_samples = 64;
  int refine_passes = 3;
  double refine_step = 1.5;
  std::uint64_t seed = 0;
};

/// Seeded random search over the hyperparameter box followed by
/// multiplicative coordinate refinement. mean_const is profiled out in
/// closed form for every candidate. Throws kFitFailure when no candidate
/// admits a Cholesky factorization, kInvalidConfig when fewer than 3 points.
GpHyperparams fit(SimilarityCache &cache, std::span<const int> ids,
                  std::span<const double> ys, KernelFamily family,
                  const FitOptions &options);

GpHyperparams fit(std::span<const Molecule> mols, std::span<const double> ys,
                  KernelFamily family, const FitOptions &options);

/// Trained GP over molecules.
class GpPosterior {
public:
  /// Retries with the noise raised to 10x its value (at least 10x kMinNoise)
  /// up to 5 times on Cholesky failure before rethrowing.
  GpPosterior(SimilarityCache &cache, std::vector<int> train_ids,
              std::vector<double> ys, const GpHyperparams &hyper);

  Prediction predict(int id) const;
  std::vector<Prediction> predict(std::span<const int> ids) const;
  Prediction predict(const Molecule &mol) const;

  const GpHyperparams &hyper() const { return hyper_; }
  const GpModel &model() const { return *model_; }
  const std::vector<int> &train_ids() const { return train_ids_; }

private:
  SimilarityCache *cache_;
  std::vector<int> train_ids_;
  GpHyperparams hyper_;
  std::unique_ptr<GpModel> model_;
};

}  // namespace molbo

#endif  // MOLBO_GP_H_
