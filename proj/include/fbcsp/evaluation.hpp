#pragma once

#include "fbcsp/pipeline.hpp"
#include "fbcsp/rng.hpp"
#include "fbcsp/session.hpp"
#include "fbcsp/stats.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fbcsp {

struct CalibrationSplit {
  std::vector<int> train_indices;  // ascending, session trial order preserved
  std::vector<int> test_indices;
  std::vector<Trial> train;
  std::vector<Trial> test;
};

// Stratified random 70/30 split of a session's calibration trials: per
// class, floor(train_fraction * n_class) trials go to training, the rest to
// the held-out evaluation set. Deterministic given the seed.
inline CalibrationSplit split_calibration(const Session& session, double train_fraction,
                                          std::uint64_t seed) {
  validate_session(session);
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("harness: train_fraction must lie in (0, 1)");
  }

  Rng rng(seed);
  std::vector<int> chosen_train;
  for (int cls : {kClassWalk, kClassRest}) {
    std::vector<int> indices;
    for (std::size_t i = 0; i < session.trials.size(); ++i) {
      if (session.trials[i].label == cls) indices.push_back(static_cast<int>(i));
    }
    rng.shuffle(indices);
    const auto n_train = static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(indices.size())));
    chosen_train.insert(chosen_train.end(), indices.begin(),
                        indices.begin() + static_cast<long>(n_train));
  }
  std::sort(chosen_train.begin(), chosen_train.end());

  CalibrationSplit split;
  split.train_indices = chosen_train;
  std::size_t next = 0;
  for (std::size_t i = 0; i < session.trials.size(); ++i) {
    if (next < chosen_train.size() && static_cast<int>(i) == chosen_train[next]) {
      split.train.push_back(session.trials[i]);
      ++next;
    } else {
      split.test_indices.push_back(static_cast<int>(i));
      split.test.push_back(session.trials[i]);
    }
  }
  if (split.train.empty() || split.test.empty()) {
    throw std::runtime_error("harness: degenerate split (too few trials)");
  }
  return split;
}

struct StudyConfig {
  FilterBankSpec spec;
  int m = 3;
  double train_fraction = 0.7;
  int max_prior = 4;
  std::uint64_t seed = 0;
};

struct MethodSummary {
  Mat accuracy;  // n_sessions x n_subjects, percent
  MedianRange pooled;
  std::vector<MedianRange> per_subject;
};

struct EvalReport {
  std::vector<std::string> subject_ids;
  MethodSummary msfbcsp;
  MethodSummary single;
  WilcoxonResult wilcoxon;  // msfbcsp vs single over all (subject, session) pairs
};

namespace detail {

// Worker pool over independent study cells. Each cell writes only its own
// output slots and derives its own seed, so the result does not depend on
// scheduling.
template <typename Fn>
void parallel_cells(std::size_t count, Fn&& fn) {
  const std::size_t n_workers =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), count);
  if (n_workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < n_workers; ++w) {
    workers.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& worker : workers) worker.join();
  if (error) std::rethrow_exception(error);
}

inline void summarize(MethodSummary& m) {
  std::vector<double> pooled;
  m.per_subject.clear();
  for (Eigen::Index s = 0; s < m.accuracy.cols(); ++s) {
    std::vector<double> col;
    for (Eigen::Index r = 0; r < m.accuracy.rows(); ++r) {
      col.push_back(m.accuracy(r, s));
      pooled.push_back(m.accuracy(r, s));
    }
    m.per_subject.push_back(median_range(col));
  }
  m.pooled = median_range(pooled);
}

}  // namespace detail

// Runs the full evaluation protocol over every (subject, session) cell:
// split the calibration data, train the single-session model on the train
// split, train the multi-session model on the same split plus the prior
// sessions' full calibration sets, evaluate both on the same held-out
// trials. Pooled statistics and the paired Wilcoxon test close the report.
inline EvalReport run_study(const std::vector<std::vector<Session>>& subjects,
                            const StudyConfig& cfg) {
  if (subjects.empty()) throw std::invalid_argument("harness: no subjects");
  const std::size_t n_sessions = subjects.front().size();
  if (n_sessions == 0) throw std::invalid_argument("harness: subject without sessions");
  for (const auto& sessions : subjects) {
    if (sessions.size() != n_sessions) {
      throw std::invalid_argument("harness: subjects disagree on session count");
    }
  }

  EvalReport report;
  const auto n_subjects = static_cast<Eigen::Index>(subjects.size());
  report.msfbcsp.accuracy.resize(static_cast<Eigen::Index>(n_sessions), n_subjects);
  report.single.accuracy.resize(static_cast<Eigen::Index>(n_sessions), n_subjects);

  for (const auto& sessions : subjects) report.subject_ids.push_back(sessions.front().subject_id);

  detail::parallel_cells(subjects.size() * n_sessions, [&](std::size_t cell) {
    const std::size_t s = cell / n_sessions;
    const std::size_t j = cell % n_sessions;
    const auto& sessions = subjects[s];
    const Session& session = sessions[j];
    const auto split = split_calibration(session, cfg.train_fraction, mix_seed(cfg.seed, s, j));

    std::vector<int> truth;
    for (const Trial& t : split.test) truth.push_back(t.label);

    const FbcspModel single_model = train_fbcsp(split.train, cfg.spec, cfg.m);
    const double acc_single = accuracy(decide(predict_fbcsp(single_model, split.test)), truth);

    Session current = session;
    current.trials = split.train;
    std::vector<Session> history(sessions.begin(), sessions.begin() + static_cast<long>(j));
    const MsFbcspModel ms_model = train_msfbcsp(current, history, cfg.spec, cfg.m, cfg.max_prior);
    const double acc_ms = accuracy(decide(predict_msfbcsp(ms_model, split.test)), truth);

    report.single.accuracy(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(s)) = acc_single;
    report.msfbcsp.accuracy(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(s)) = acc_ms;
  });

  detail::summarize(report.msfbcsp);
  detail::summarize(report.single);

  std::vector<double> ms_flat, single_flat;
  for (Eigen::Index s = 0; s < n_subjects; ++s) {
    for (Eigen::Index r = 0; r < report.msfbcsp.accuracy.rows(); ++r) {
      ms_flat.push_back(report.msfbcsp.accuracy(r, s));
      single_flat.push_back(report.single.accuracy(r, s));
    }
  }
  report.wilcoxon = wilcoxon_signed_rank(ms_flat, single_flat);
  return report;
}

namespace detail {

inline std::string format_display(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", display_round(v));
  return buf;
}

inline nlohmann::json method_to_json(const MethodSummary& m) {
  nlohmann::json j;
  j["accuracy"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.accuracy.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.accuracy.cols(); ++c) row.push_back(m.accuracy(r, c));
    j["accuracy"].push_back(std::move(row));
  }
  j["pooled_median"] = m.pooled.median;
  j["pooled_range"] = {m.pooled.min, m.pooled.max};
  j["per_subject"] = nlohmann::json::array();
  for (const MedianRange& mr : m.per_subject) {
    j["per_subject"].push_back({{"median", mr.median}, {"range", {mr.min, mr.max}}});
  }
  return j;
}

}  // namespace detail

inline void write_report_json(const EvalReport& report, const std::filesystem::path& path) {
  nlohmann::json j;
  j["subjects"] = report.subject_ids;
  j["n_sessions"] = report.msfbcsp.accuracy.rows();
  j["methods"] = {{"msfbcsp", detail::method_to_json(report.msfbcsp)},
                  {"single", detail::method_to_json(report.single)}};
  j["wilcoxon"] = {{"w_plus", report.wilcoxon.w_plus},
                   {"p", report.wilcoxon.p},
                   {"n_effective", report.wilcoxon.n_effective}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("harness: cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// CSV in the published tables' layout: rows = sessions, columns = subjects,
// bottom row = "median (min-max)", all values displayed at one decimal.
inline void write_method_csv(const MethodSummary& m, const std::vector<std::string>& subject_ids,
                             const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("harness: cannot write " + path.string());
  out << "Session";
  for (const auto& id : subject_ids) out << ',' << id;
  out << '\n';
  for (Eigen::Index r = 0; r < m.accuracy.rows(); ++r) {
    out << (r + 1);
    for (Eigen::Index c = 0; c < m.accuracy.cols(); ++c) {
      out << ',' << detail::format_display(m.accuracy(r, c));
    }
    out << '\n';
  }
  out << "Median (range)";
  for (const MedianRange& mr : m.per_subject) {
    out << ',' << detail::format_display(mr.median) << " (" << detail::format_display(mr.min)
        << '-' << detail::format_display(mr.max) << ')';
  }
  out << '\n';
}

}  // namespace fbcsp
