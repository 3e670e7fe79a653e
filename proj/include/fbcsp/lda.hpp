#pragma once

#include "fbcsp/session.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fbcsp {

// Analytic ("automatic") shrinkage of the sample covariance toward the
// scaled identity nu*I, nu = mean diagonal of S. The intensity gamma is the
// closed-form Ledoit-Wolf estimator, no cross-validation:
//
//   S      = X'X / n                       (X mean-centered, n samples)
//   nu     = tr(S) / d
//   delta2 = ||S - nu I||_F^2 / d          (dispersion around the target)
//   beta2  = min(delta2,
//              sum_i ||x_i x_i' - S||_F^2 / (n^2 d))
//   gamma  = beta2 / delta2, clamped to [0, 1]
//   Sigma  = (1 - gamma) S + gamma nu I
//
// The per-sample sum collapses algebraically to sum_i ||x_i||^4 - n ||S||_F^2.
struct ShrunkCovariance {
  Mat sigma;
  double gamma = 0.0;
};

inline ShrunkCovariance shrunk_covariance(const Mat& centered,
                                          std::optional<double> forced_gamma = std::nullopt) {
  const Eigen::Index n = centered.rows();
  const Eigen::Index d = centered.cols();
  if (n < 2) throw std::invalid_argument("lda: shrinkage needs at least 2 samples");
  if (d < 1) throw std::invalid_argument("lda: shrinkage needs at least 1 feature");

  const Mat sample = centered.transpose() * centered / static_cast<double>(n);
  const double nu = sample.trace() / static_cast<double>(d);

  double gamma;
  if (forced_gamma) {
    gamma = std::clamp(*forced_gamma, 0.0, 1.0);
  } else {
    const double sample_norm2 = sample.squaredNorm();
    double delta2 = (sample_norm2 - 2.0 * nu * sample.trace()) / static_cast<double>(d) + nu * nu;
    delta2 = std::max(delta2, 0.0);

    double quartic_sum = 0.0;  // sum_i ||x_i||^4
    for (Eigen::Index i = 0; i < n; ++i) {
      const double norm2 = centered.row(i).squaredNorm();
      quartic_sum += norm2 * norm2;
    }
    double beta2 = (quartic_sum - static_cast<double>(n) * sample_norm2) /
                   (static_cast<double>(n) * static_cast<double>(n) * static_cast<double>(d));
    beta2 = std::max(beta2, 0.0);
    beta2 = std::min(beta2, delta2);

    gamma = delta2 > 0.0 ? beta2 / delta2 : 0.0;
    gamma = std::clamp(gamma, 0.0, 1.0);
  }

  ShrunkCovariance out;
  out.gamma = gamma;
  out.sigma = (1.0 - gamma) * sample;
  out.sigma.diagonal().array() += gamma * nu;
  return out;
}

// Fisher LDA with shrunk pooled covariance. Emits two-class posterior
// probabilities under a shared-covariance Gaussian model with equal priors:
// p(walk | x) = logistic(w'x + b), w = Sigma^{-1} (mu0 - mu1),
// b = -(mu0 + mu1)' w / 2.
struct LdaModel {
  Vec mean0, mean1;
  Mat covariance_cholesky;  // lower factor L, Sigma = L L'
  double shrinkage_gamma = 0.0;
  int feature_dim = 0;

  // Derived at construction and after deserialization, never stored.
  Vec weights;
  double bias = 0.0;

  // Applies Sigma^{-1} via the stored factor.
  Vec apply_precision(const Vec& v) const {
    Vec y = covariance_cholesky.triangularView<Eigen::Lower>().solve(v);
    return covariance_cholesky.transpose().triangularView<Eigen::Upper>().solve(y);
  }

  void finalize() {
    weights = apply_precision(mean0 - mean1);
    bias = -0.5 * (mean0 + mean1).dot(weights);
  }
};

inline LdaModel train_lda(const Mat& features, const std::vector<int>& labels,
                          std::optional<double> forced_gamma = std::nullopt) {
  const Eigen::Index n = features.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw std::invalid_argument("lda: label count does not match feature rows");
  }
  if (n < 4) throw std::invalid_argument("lda: need at least 4 samples");
  if (!features.allFinite()) throw std::invalid_argument("lda: non-finite feature");

  Eigen::Index n0 = 0, n1 = 0;
  for (int l : labels) {
    if (l == kClassWalk) ++n0;
    else if (l == kClassRest) ++n1;
    else throw std::invalid_argument("lda: unknown class id");
  }
  if (n0 == 0 || n1 == 0) throw std::invalid_argument("lda: both classes must be present");

  const Eigen::Index d = features.cols();
  LdaModel model;
  model.feature_dim = static_cast<int>(d);
  model.mean0 = Vec::Zero(d);
  model.mean1 = Vec::Zero(d);
  for (Eigen::Index i = 0; i < n; ++i) {
    (labels[i] == kClassWalk ? model.mean0 : model.mean1) += features.row(i).transpose();
  }
  model.mean0 /= static_cast<double>(n0);
  model.mean1 /= static_cast<double>(n1);

  // Pooled within-class scatter: remove each sample's own class mean.
  Mat centered(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec& mu = labels[i] == kClassWalk ? model.mean0 : model.mean1;
    centered.row(i) = features.row(i) - mu.transpose();
  }

  const ShrunkCovariance shrunk = shrunk_covariance(centered, forced_gamma);
  model.shrinkage_gamma = shrunk.gamma;

  Eigen::LLT<Mat> llt(shrunk.sigma);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("lda: shrunk covariance is not positive definite");
  }
  model.covariance_cholesky = llt.matrixL();
  model.finalize();
  return model;
}

// Numerically safe logistic.
inline double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// N x 2 class-belonging probabilities; column 0 = walk, column 1 = rest.
// Every row sums to 1.
inline Mat predict_proba(const LdaModel& model, const Mat& features) {
  if (features.cols() != model.feature_dim) {
    throw std::invalid_argument("lda: feature dimension does not match model");
  }
  if (!features.allFinite()) throw std::invalid_argument("lda: non-finite feature");

  Mat probs(features.rows(), 2);
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    const double z = features.row(i).dot(model.weights) + model.bias;
    const double p0 = logistic(z);
    probs(i, 0) = p0;
    probs(i, 1) = 1.0 - p0;
  }
  return probs;
}

inline bool is_probability_matrix(const Mat& probs, double tol = 1e-12) {
  if (probs.cols() != 2) return false;
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    if (probs(i, 0) < 0.0 || probs(i, 0) > 1.0) return false;
    if (probs(i, 1) < 0.0 || probs(i, 1) > 1.0) return false;
    if (std::abs(probs(i, 0) + probs(i, 1) - 1.0) > tol) return false;
  }
  return true;
}

}  // namespace fbcsp
