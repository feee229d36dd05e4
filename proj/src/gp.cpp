//
// molbo - Copyright 2026 The molbo Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molbo/gp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include <Eigen/Cholesky>

#include "molbo/error.h"

namespace molbo {
namespace {
double lml_at(const GpModel &m, const Eigen::VectorXd &y, double mean) {
  const Eigen::MatrixXd &l = m.chol_factor();
  const Eigen::VectorXd r = (y.array() - mean).matrix();
  const Eigen::VectorXd z = l.triangularView<Eigen::Lower>().solve(r);
  const double logdet = 2.0 * l.diagonal().array().log().sum();
  return -0.5 * z.squaredNorm() - 0.5 * logdet
         - 0.5 * static_cast<double>(y.size()) * std::log(2.0 * std::numbers::pi);
}

// Search coordinates: log-scaled parameters move in log space, alphas
// linearly.
struct Coordinate {
  double lo;
  double hi;
  bool log_scale;
};

struct Candidate {
  std::vector<double> values;  // betas..., alphas..., noise, signal
};

std::vector<Coordinate> coordinates(KernelFamily family) {
  std::vector<Coordinate> c;
  if (family != KernelFamily::kFingerprint) {
    for (int i = 0; i < 4; ++i)
      c.push_back({ kMinBeta, kMaxBeta, true });
  }
  if (family == KernelFamily::kSum) {
    c.push_back({ 0.0, kMaxAlpha, false });
    c.push_back({ 0.0, kMaxAlpha, false });
  }
  c.push_back({ kMinNoise, kMaxNoise, true });
  c.push_back({ kMinSignal, kMaxSignal, true });
  return c;
}

GpHyperparams to_hyper(const Candidate &cand, KernelFamily family,
                       const FingerprintParams &fp) {
  GpHyperparams h;
  std::size_t i = 0;
  std::array<double, 4> betas {};
  if (family != KernelFamily::kFingerprint) {
    for (double &b: betas)
      b = cand.values[i++];
  }
  switch (family) {
  case KernelFamily::kFingerprint:
    h.kernel = TanimotoKernel { fp };
    break;
  case KernelFamily::kOt:
    h.kernel = OtExpSumKernel { betas };
    break;
  case KernelFamily::kSum: {
    const double a1 = cand.values[i++];
    const double a2 = cand.values[i++];
    h.kernel = SumKernel { a1, a2, fp, betas };
    break;
  }
  }
  h.noise_var = cand.values[i++];
  h.signal_scale = cand.values[i++];
  return h;
}

std::unique_ptr<GpModel> build_with_retry(const Eigen::MatrixXd &k,
                                          const Eigen::VectorXd &y,
                                          GpHyperparams &hyper, int retries) {
  for (int attempt = 0;; ++attempt) {
    try {
      return std::make_unique<GpModel>(k, y, hyper.noise_var, hyper.signal_scale,
                                       hyper.mean_const);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kCholeskyFailure || attempt >= retries)
        throw;
      hyper.noise_var = std::max(hyper.noise_var, kMinNoise) * 10.0;
    }
  }
}
}  // namespace

GpModel::GpModel(const Eigen::MatrixXd &k_train, Eigen::VectorXd y,
                 double noise_var, double signal_scale, double mean_const)
    : y_(std::move(y)), noise_var_(noise_var),
      signal_var_(signal_scale * signal_scale), mean_(mean_const) {
  const Eigen::Index n = y_.size();
  if (k_train.rows() != n || k_train.cols() != n)
    throw Error(ErrorCode::kLengthMismatch, "gp: gram size differs from targets");
  if (n == 0)
    throw Error(ErrorCode::kInvalidConfig, "gp: no training points");
  projected_ = psd_project({ k_train, false }).values;
  k_tilde_ = signal_var_ * projected_;
  k_tilde_.diagonal().array() += noise_var_;
  Eigen::LLT<Eigen::MatrixXd> llt(k_tilde_);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::kCholeskyFailure, "gp: covariance not positive definite");
  l_ = llt.matrixL();
  if (!(l_.diagonal().minCoeff() > 0) || !l_.allFinite())
    throw Error(ErrorCode::kCholeskyFailure, "gp: degenerate Cholesky factor");
  alpha_ = llt.solve((y_.array() - mean_).matrix());
}

Prediction GpModel::predict(const Eigen::VectorXd &k_star, double k_self) const {
  const Eigen::VectorXd ks = signal_var_ * k_star;
  const double mu = mean_ + ks.dot(alpha_);
  const Eigen::VectorXd v = l_.triangularView<Eigen::Lower>().solve(ks);
  return { mu, std::max(0.0, signal_var_ * k_self - v.squaredNorm()) };
}

Prediction GpModel::predict_training(Eigen::Index i) const {
  return predict(projected_.row(i).transpose(), projected_(i, i));
}

double GpModel::log_marginal_likelihood() const {
  return lml_at(*this, y_, mean_);
}

double GpModel::profiled_mean() const {
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(y_.size());
  const auto lower = l_.triangularView<Eigen::Lower>();
  const Eigen::VectorXd a = lower.solve(ones);
  const Eigen::VectorXd b = lower.solve(y_);
  return a.dot(b) / a.squaredNorm();
}

double log_marginal_likelihood(std::span<const Molecule> mols,
                               std::span<const double> ys,
                               const GpHyperparams &hyper) {
  if (mols.size() != ys.size() || mols.empty())
    throw Error(ErrorCode::kLengthMismatch, "gp: molecule and target counts differ");
  const GramMatrix g = gram(mols, hyper.kernel);
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  return GpModel(g.values, y, hyper.noise_var, hyper.signal_scale, hyper.mean_const)
      .log_marginal_likelihood();
}

GpHyperparams fit(SimilarityCache &cache, std::span<const int> ids,
                  std::span<const double> ys, KernelFamily family,
                  const FitOptions &options) {
  if (ids.size() != ys.size())
    throw Error(ErrorCode::kLengthMismatch, "gp: molecule and target counts differ");
  if (ids.size() < 3)
    throw Error(ErrorCode::kInvalidConfig, "gp: fit needs at least 3 points");
  const PairwiseBlock block = cache.block(ids, ids, family);
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  const std::vector<Coordinate> coords = coordinates(family);
  const FingerprintParams fp = cache.fingerprint_params();

  // Scores a candidate with the mean profiled out; nullopt when every
  // jitter retry fails.
  auto score = [&](const Candidate &cand) -> std::optional<std::pair<double, GpHyperparams>> {
    GpHyperparams h = to_hyper(cand, family, fp);
    const Eigen::MatrixXd k = kernel_block(block, h.kernel);
    h.mean_const = 0.0;
    std::unique_ptr<GpModel> m;
    try {
      m = build_with_retry(k, y, h, 3);
    } catch (const Error &e) {
      if (e.code() == ErrorCode::kCholeskyFailure || e.code() == ErrorCode::kEigenFailure)
        return std::nullopt;
      throw;
    }
    h.mean_const = m->profiled_mean();
    const double lml = lml_at(*m, y, h.mean_const);
    if (!std::isfinite(lml))
      return std::nullopt;
    return std::make_pair(lml, h);
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](const Coordinate &c) {
    const double u = unit(rng);
    if (c.log_scale)
      return std::exp(std::log(c.lo) + u * (std::log(c.hi) - std::log(c.lo)));
    return c.lo + u * (c.hi - c.lo);
  };

  double best_lml = -std::numeric_limits<double>::infinity();
  Candidate best_cand;
  GpHyperparams best;
  bool found = false;
  for (int s = 0; s < options.random_samples; ++s) {
    Candidate cand;
    for (const Coordinate &c: coords)
      cand.values.push_back(draw(c));
    if (auto r = score(cand); r && r->first > best_lml) {
      best_lml = r->first;
      best = r->second;
      best_cand = cand;
      found = true;
    }
  }
  if (!found)
    throw Error(ErrorCode::kFitFailure, "gp: no hyperparameter candidate was feasible");

  for (int pass = 0; pass < options.refine_passes; ++pass) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
      for (double factor: { options.refine_step, 1.0 / options.refine_step }) {
        Candidate cand = best_cand;
        cand.values[i] = std::clamp(cand.values[i] * factor, coords[i].lo, coords[i].hi);
        if (cand.values[i] == best_cand.values[i])
          continue;
        if (auto r = score(cand); r && r->first > best_lml) {
          best_lml = r->first;
          best = r->second;
          best_cand = cand;
        }
      }
    }
  }
  return best;
}

GpHyperparams fit(std::span<const Molecule> mols, std::span<const double> ys,
                  KernelFamily family, const FitOptions &options) {
  SimilarityCache cache;
  std::vector<int> ids;
  for (const Molecule &m: mols)
    ids.push_back(cache.intern(m));
  return fit(cache, ids, ys, family, options);
}

GpPosterior::GpPosterior(SimilarityCache &cache, std::vector<int> train_ids,
                         std::vector<double> ys, const GpHyperparams &hyper)
    : cache_(&cache), train_ids_(std::move(train_ids)), hyper_(hyper) {
  if (train_ids_.size() != ys.size())
    throw Error(ErrorCode::kLengthMismatch, "gp: molecule and target counts differ");
  const Eigen::MatrixXd k = cache.kernel_matrix(train_ids_, train_ids_, hyper_.kernel);
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  model_ = build_with_retry(k, y, hyper_, 5);
}

Prediction GpPosterior::predict(int id) const {
  const int one[] = { id };
  return predict(std::span<const int>(one))[0];
}

std::vector<Prediction> GpPosterior::predict(std::span<const int> ids) const {
  std::vector<Prediction> out(ids.size());
  std::vector<int> fresh;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto it = std::find(train_ids_.begin(), train_ids_.end(), ids[i]);
    if (it != train_ids_.end()) {
      out[i] = model_->predict_training(it - train_ids_.begin());
    } else {
      fresh.push_back(ids[i]);
      slots.push_back(i);
    }
  }
  if (fresh.empty())
    return out;
  const Eigen::MatrixXd cross = cache_->kernel_matrix(fresh, train_ids_, hyper_.kernel);
  for (std::size_t k = 0; k < fresh.size(); ++k) {
    const int self[] = { fresh[k] };
    const double k_self = cache_->kernel_matrix(self, self, hyper_.kernel)(0, 0);
    out[slots[k]] =
        model_->predict(cross.row(static_cast<Eigen::Index>(k)).transpose(), k_self);
  }
  return out;
}

Prediction GpPosterior::predict(const Molecule &mol) const {
  return predict(cache_->intern(mol));
}

}  // namespace molbo
