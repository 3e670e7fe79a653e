#pragma once

#include "fbcsp/csp.hpp"
#include "fbcsp/filter_bank.hpp"
#include "fbcsp/filters.hpp"
#include "fbcsp/lda.hpp"
#include "fbcsp/session.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

namespace fbcsp {

// Trained single-session model: one CSP cell per (band, window), features
// concatenated band-major / window-minor, classified by shrinkage LDA.
struct FbcspModel {
  FilterBankSpec spec;
  int m = 3;
  std::vector<CspModel> csp_cells;
  LdaModel lda;

  Eigen::Index n_channels() const {
    return csp_cells.empty() ? 0 : csp_cells.front().n_channels();
  }
};

// Multi-session model: the current-session model (producing P_n) plus an
// optional model trained on pooled prior-session calibration data
// (producing P_p). prior is absent exactly when k = 1.
struct MsFbcspModel {
  FbcspModel current;
  std::optional<FbcspModel> prior;
  int k = 1;
  std::vector<int> history_sessions_used;
};

namespace detail {

inline void check_trials_uniform(const std::vector<Trial>& trials) {
  if (trials.empty()) throw std::invalid_argument("pipeline: no trials");
  const Eigen::Index rows = trials.front().samples.rows();
  const Eigen::Index cols = trials.front().samples.cols();
  for (const Trial& t : trials) {
    if (t.samples.rows() != rows || t.samples.cols() != cols) {
      throw std::invalid_argument("pipeline: trials disagree on shape");
    }
  }
}

}  // namespace detail

// Feature matrix (trials x |bands|*|windows|*2m) for an already-trained
// model; cell order matches training.
inline Mat fbcsp_features(const FbcspModel& model, const std::vector<Trial>& trials) {
  const auto n = static_cast<Eigen::Index>(trials.size());
  const auto n_windows = static_cast<Eigen::Index>(model.spec.windows.size());
  const Eigen::Index width = 2 * model.m;
  Mat features(n, static_cast<Eigen::Index>(model.csp_cells.size()) * width);
  if (n == 0) return features;

  detail::check_trials_uniform(trials);
  if (trials.front().samples.cols() != model.n_channels()) {
    throw std::invalid_argument("pipeline: trial channel count does not match model");
  }

  for (std::size_t bi = 0; bi < model.spec.bands.size(); ++bi) {
    const auto& band = model.spec.bands[bi];
    const IirFilter filt = design_bandpass(band.first, band.second, model.spec.fs_hz);
    for (Eigen::Index t = 0; t < n; ++t) {
      const Mat filtered = apply_filter(filt, trials[t].samples);
      for (std::size_t wi = 0; wi < model.spec.windows.size(); ++wi) {
        const Mat segment = extract_window(filtered, model.spec.windows[wi], model.spec.fs_hz);
        const Eigen::Index cell = static_cast<Eigen::Index>(bi) * n_windows +
                                  static_cast<Eigen::Index>(wi);
        features.block(t, cell * width, 1, width) =
            csp_features(model.csp_cells[cell], segment).transpose();
      }
    }
  }
  return features;
}

// Trains the full single-session model: per (band, window) cell, filter the
// trials, cut the window, train CSP on the per-class covariances; then train
// LDA on the concatenated log-variance features.
inline FbcspModel train_fbcsp(const std::vector<Trial>& train_trials, const FilterBankSpec& spec,
                              int m = 3) {
  validate_spec(spec);
  detail::check_trials_uniform(train_trials);
  if (m < 1) throw std::invalid_argument("pipeline: m must be >= 1");

  const auto n = static_cast<Eigen::Index>(train_trials.size());
  std::vector<int> labels(train_trials.size());
  bool has_walk = false, has_rest = false;
  for (std::size_t i = 0; i < train_trials.size(); ++i) {
    labels[i] = train_trials[i].label;
    (labels[i] == kClassWalk ? has_walk : has_rest) = true;
  }
  if (!has_walk || !has_rest) {
    throw std::invalid_argument("pipeline: training set must contain both classes");
  }

  FbcspModel model;
  model.spec = spec;
  model.m = m;
  const auto n_windows = static_cast<Eigen::Index>(spec.windows.size());
  const Eigen::Index width = 2 * m;
  Mat features(n, static_cast<Eigen::Index>(spec.bands.size()) * n_windows * width);

  std::vector<Mat> filtered(train_trials.size());
  for (std::size_t bi = 0; bi < spec.bands.size(); ++bi) {
    const auto& band = spec.bands[bi];
    const IirFilter filt = design_bandpass(band.first, band.second, spec.fs_hz);
    for (std::size_t t = 0; t < train_trials.size(); ++t) {
      filtered[t] = apply_filter(filt, train_trials[t].samples);
    }
    for (std::size_t wi = 0; wi < spec.windows.size(); ++wi) {
      std::vector<Mat> covs[2];
      std::vector<Mat> segments(train_trials.size());
      for (std::size_t t = 0; t < train_trials.size(); ++t) {
        segments[t] = extract_window(filtered[t], spec.windows[wi], spec.fs_hz);
        covs[labels[t]].push_back(trial_covariance(segments[t]));
      }
      CspModel cell = train_csp(covs[kClassWalk], covs[kClassRest], m);
      cell.band = band;
      cell.window = spec.windows[wi];

      const Eigen::Index cell_idx = static_cast<Eigen::Index>(bi) * n_windows +
                                    static_cast<Eigen::Index>(wi);
      for (std::size_t t = 0; t < train_trials.size(); ++t) {
        features.block(static_cast<Eigen::Index>(t), cell_idx * width, 1, width) =
            csp_features(cell, segments[t]).transpose();
      }
      model.csp_cells.push_back(std::move(cell));
    }
  }

  model.lda = train_lda(features, labels);
  return model;
}

// N x 2 probabilities in trial order; empty input gives a 0 x 2 matrix.
inline Mat predict_fbcsp(const FbcspModel& model, const std::vector<Trial>& trials) {
  if (trials.empty()) return Mat(0, 2);
  return predict_proba(model.lda, fbcsp_features(model, trials));
}

// Trains the multi-session model. The current model sees only the current
// session's trials; the prior model is retrained from scratch on the pooled
// trials of the most recent min(4, |history|) sessions (recency minimizes
// the non-stationarity gap). With no history the model reduces to the
// single-session one and k is recorded as 1.
inline MsFbcspModel train_msfbcsp(const Session& current_session,
                                  const std::vector<Session>& history,
                                  const FilterBankSpec& spec, int m = 3, int max_prior = 4) {
  validate_session(current_session);
  if (max_prior < 0) throw std::invalid_argument("pipeline: max_prior must be >= 0");

  MsFbcspModel model;
  model.current = train_fbcsp(current_session.trials, spec, m);

  std::vector<const Session*> ordered;
  for (const Session& h : history) {
    if (!ordered.empty() && h.session_index <= ordered.back()->session_index) {
      throw std::invalid_argument("pipeline: history sessions must have increasing indices");
    }
    if (h.session_index >= current_session.session_index) {
      throw std::invalid_argument("pipeline: history sessions must precede the current session");
    }
    if (h.channel_names != current_session.channel_names) {
      throw std::invalid_argument("pipeline: channel layout mismatch across sessions");
    }
    ordered.push_back(&h);
  }

  const std::size_t use = std::min(ordered.size(), static_cast<std::size_t>(max_prior));
  if (use == 0) {
    model.k = 1;
    return model;
  }

  std::vector<Trial> pooled;
  for (std::size_t i = ordered.size() - use; i < ordered.size(); ++i) {
    validate_session(*ordered[i]);
    pooled.insert(pooled.end(), ordered[i]->trials.begin(), ordered[i]->trials.end());
    model.history_sessions_used.push_back(ordered[i]->session_index);
  }
  model.prior = train_fbcsp(pooled, spec, m);
  model.k = current_session.session_index;
  return model;
}

// P_out: the current model's probabilities when no prior exists (k = 1),
// otherwise the element-wise mean (P_p + P_n) / 2.
inline Mat predict_msfbcsp(const MsFbcspModel& model, const std::vector<Trial>& trials) {
  Mat p_n = predict_fbcsp(model.current, trials);
  if (!model.prior) return p_n;
  const Mat p_p = predict_fbcsp(*model.prior, trials);
  if (p_p.rows() != p_n.rows() || p_p.cols() != p_n.cols()) {
    throw std::logic_error("pipeline: P_p / P_n shape mismatch");
  }
  return 0.5 * (p_n + p_p);
}

// Per trial, the class whose probability exceeds 0.5; the exact tie goes to
// "rest" (the null action).
inline std::vector<int> decide(const Mat& probs) {
  if (probs.cols() != 2) throw std::invalid_argument("pipeline: expected an N x 2 matrix");
  std::vector<int> out(static_cast<std::size_t>(probs.rows()));
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    out[static_cast<std::size_t>(i)] = probs(i, 0) > 0.5 ? kClassWalk : kClassRest;
  }
  return out;
}

}  // namespace fbcsp
