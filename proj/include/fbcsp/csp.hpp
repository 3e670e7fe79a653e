#pragma once

#include "fbcsp/session.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fbcsp {

// Spatial filters for one (band, window) cell. filters has one column per
// spatial filter, 2m columns total: the m most class-0-dominant directions
// followed by the m most class-1-dominant ones. With the training class-mean
// covariances C0, C1 the columns W satisfy W' (C0 + C1) W = I and
// W' C0 W = diag(lambda) with lambda sorted descending.
struct CspModel {
  Mat filters;  // channels x 2m
  std::pair<double, double> band{0.0, 0.0};
  std::pair<double, double> window{0.0, 0.0};

  Eigen::Index n_channels() const { return filters.rows(); }
  Eigen::Index n_filters() const { return filters.cols(); }
};

// Per-trial normalized covariance: column means removed, C = X'X / tr(X'X).
// Trace normalization makes class averages robust to trial-to-trial
// amplitude differences.
inline Mat trial_covariance(const Mat& segment) {
  if (segment.rows() < 2 || segment.cols() < 1) {
    throw std::invalid_argument("csp: segment needs >= 2 rows and >= 1 channel");
  }
  const Mat centered = segment.rowwise() - segment.colwise().mean();
  Mat c = centered.transpose() * centered;
  const double tr = c.trace();
  if (!(tr > 0.0)) throw std::runtime_error("csp: zero-variance segment");
  c /= tr;
  return c;
}

namespace detail {

inline Mat mean_covariance(const std::vector<Mat>& covs, Eigen::Index dim) {
  Mat mean = Mat::Zero(dim, dim);
  for (const Mat& c : covs) {
    if (c.rows() != dim || c.cols() != dim) {
      throw std::invalid_argument("csp: covariance dimension mismatch");
    }
    mean += c;
  }
  mean /= static_cast<double>(covs.size());
  return mean;
}

// Flips each column so its largest-magnitude coefficient is positive; makes
// trained models byte-comparable across runs.
inline void fix_column_signs(Mat& w) {
  for (Eigen::Index j = 0; j < w.cols(); ++j) {
    Eigen::Index imax = 0;
    w.col(j).cwiseAbs().maxCoeff(&imax);
    if (w(imax, j) < 0.0) w.col(j) = -w.col(j);
  }
}

}  // namespace detail

// Trains CSP filters from per-trial covariances of the two classes. Solves
// C0 w = lambda (C0 + C1) w by whitening the composite: eigendecompose
// C0 + C1 (with a tiny ridge and a rank guard), whiten, eigendecompose the
// whitened C0, sort descending, keep the first m and last m eigenvectors
// back-transformed.
inline CspModel train_csp(const std::vector<Mat>& class0_covs, const std::vector<Mat>& class1_covs,
                          int m = 3) {
  if (class0_covs.empty() || class1_covs.empty()) {
    throw std::invalid_argument("csp: both classes need at least one covariance");
  }
  if (m < 1) throw std::invalid_argument("csp: m must be >= 1");

  const Eigen::Index dim = class0_covs.front().rows();
  const Mat c0 = detail::mean_covariance(class0_covs, dim);
  const Mat c1 = detail::mean_covariance(class1_covs, dim);

  Mat composite = c0 + c1;
  composite += (1e-9 * composite.trace() / static_cast<double>(dim)) *
               Mat::Identity(dim, dim);

  Eigen::SelfAdjointEigenSolver<Mat> comp_eig(composite);
  if (comp_eig.info() != Eigen::Success) {
    throw std::runtime_error("csp: eigendecomposition of composite covariance failed");
  }
  const Vec evals = comp_eig.eigenvalues();  // ascending
  const double max_eval = evals(dim - 1);
  if (!(max_eval > 0.0)) {
    throw std::runtime_error("csp: composite covariance not positive definite");
  }

  // Keep only directions carrying variance; protects against rank-deficient
  // composites (few channels, short windows).
  Eigen::Index first_kept = 0;
  while (first_kept < dim && evals(first_kept) < 1e-10 * max_eval) ++first_kept;
  const Eigen::Index rank = dim - first_kept;
  if (rank < 2 * m) {
    throw std::runtime_error("csp: composite rank too low for requested pattern count");
  }

  Mat whitener(rank, dim);  // P with P (C0+C1) P' = I
  for (Eigen::Index i = 0; i < rank; ++i) {
    whitener.row(i) =
        comp_eig.eigenvectors().col(first_kept + i).transpose() / std::sqrt(evals(first_kept + i));
  }

  Mat whitened = whitener * c0 * whitener.transpose();
  whitened = 0.5 * (whitened + whitened.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> disc_eig(whitened);
  if (disc_eig.info() != Eigen::Success) {
    throw std::runtime_error("csp: eigendecomposition of whitened covariance failed");
  }

  // Ascending -> descending, back-transform, then take the m head and m tail
  // columns (most discriminative for class 0 and class 1 respectively).
  Mat all_filters(dim, rank);
  for (Eigen::Index i = 0; i < rank; ++i) {
    all_filters.col(i) = whitener.transpose() * disc_eig.eigenvectors().col(rank - 1 - i);
  }
  CspModel model;
  model.filters.resize(dim, 2 * m);
  model.filters.leftCols(m) = all_filters.leftCols(m);
  model.filters.rightCols(m) = all_filters.rightCols(m);

  // The ridge biases w' (C0 + C1) w away from 1 by ~1e-9; renormalize each
  // filter against the unridged composite so the eigenvalue pair sums are
  // exact.
  const Mat raw_composite = c0 + c1;
  for (Eigen::Index j = 0; j < model.filters.cols(); ++j) {
    const double scale = model.filters.col(j).dot(raw_composite * model.filters.col(j));
    if (!(scale > 0.0)) throw std::runtime_error("csp: degenerate filter normalization");
    model.filters.col(j) /= std::sqrt(scale);
  }
  detail::fix_column_signs(model.filters);
  return model;
}

// Log of the normalized variance of each spatial-filter projection:
// f_j = log(var(Y_j) / sum_k var(Y_k)) with Y = X W after column centering.
inline Vec csp_features(const CspModel& model, const Mat& segment) {
  if (segment.cols() != model.n_channels()) {
    throw std::invalid_argument("csp: segment channel count does not match model");
  }
  if (segment.rows() < 2) throw std::invalid_argument("csp: segment needs >= 2 rows");

  const Mat centered = segment.rowwise() - segment.colwise().mean();
  const Mat projected = centered * model.filters;
  Vec variances = projected.colwise().squaredNorm();
  const double total = variances.sum();
  if (!(total > 0.0)) throw std::runtime_error("csp: zero total projected variance");

  Vec features(variances.size());
  for (Eigen::Index j = 0; j < variances.size(); ++j) {
    features(j) = std::log(variances(j) / total);
    if (!std::isfinite(features(j))) {
      throw std::runtime_error("csp: degenerate projected variance");
    }
  }
  return features;
}

}  // namespace fbcsp
