#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace fbcsp {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Class convention used everywhere, including the column order of
// probability matrices: column 0 = "walk", column 1 = "rest".
constexpr int kClassWalk = 0;
constexpr int kClassRest = 1;

inline const char* class_name(int label) {
  if (label == kClassWalk) return "walk";
  if (label == kClassRest) return "rest";
  throw std::invalid_argument("session: unknown class id " + std::to_string(label));
}

inline int class_id(const std::string& name) {
  if (name == "walk") return kClassWalk;
  if (name == "rest") return kClassRest;
  throw std::runtime_error("session: unknown label string '" + name + "'");
}

// One calibration trial. samples: rows = time samples, columns = channels,
// values in microvolts.
struct Trial {
  int label = kClassRest;
  Mat samples;
};

// One calibration session: the unit of training data. session_index is the
// 1-based position k of the session in the recording protocol.
struct Session {
  std::string subject_id;
  int session_index = 1;
  double fs_hz = 256.0;
  std::vector<std::string> channel_names;
  std::vector<Trial> trials;
};

inline void validate_trial(const Trial& t, Eigen::Index n_channels) {
  if (t.label != kClassWalk && t.label != kClassRest) {
    throw std::runtime_error("session: trial label must be 0 (walk) or 1 (rest)");
  }
  if (t.samples.rows() < 2) {
    throw std::runtime_error("session: trial must contain at least 2 samples");
  }
  if (t.samples.cols() != n_channels) {
    throw std::runtime_error("session: trial channel count mismatch");
  }
  if (!t.samples.allFinite()) {
    throw std::runtime_error("session: non-finite sample value");
  }
}

// Enforces the structural invariants every consumer relies on: uniform trial
// shape, finite data, and two nonempty classes (CSP cannot be trained
// otherwise).
inline void validate_session(const Session& s) {
  if (s.trials.empty()) throw std::runtime_error("session: empty session");
  if (!(s.fs_hz > 0)) throw std::runtime_error("session: sampling rate must be positive");
  if (s.session_index < 1) throw std::runtime_error("session: session index must be >= 1");
  if (s.channel_names.empty()) throw std::runtime_error("session: no channels");

  const auto n_channels = static_cast<Eigen::Index>(s.channel_names.size());
  const Eigen::Index rows = s.trials.front().samples.rows();
  int per_class[2] = {0, 0};
  for (const Trial& t : s.trials) {
    validate_trial(t, n_channels);
    if (t.samples.rows() != rows) {
      throw std::runtime_error("session: trials disagree on sample count");
    }
    ++per_class[t.label];
  }
  if (per_class[0] < 2 || per_class[1] < 2) {
    throw std::runtime_error("session: both classes need at least 2 trials");
  }
}

}  // namespace fbcsp
