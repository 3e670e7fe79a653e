#pragma once

// Small, strongly separable synthetic scenarios for fast pipeline tests.

#include "fbcsp/filter_bank.hpp"
#include "fbcsp/synth.hpp"

namespace testdata {

inline fbcsp::SynthConfig strong_config(int n_sessions = 1, int n_trials = 16,
                                        std::uint64_t seed = 1234) {
  fbcsp::SynthConfig cfg;
  cfg.n_subjects = 1;
  cfg.n_sessions = n_sessions;
  cfg.n_trials = n_trials;
  cfg.fs_hz = 128.0;
  cfg.n_channels = 8;
  cfg.erd_depth = 0.8;
  cfg.drift_strength = 0.02;
  cfg.noise_level = 0.3;
  cfg.seed = seed;
  return cfg;
}

inline std::vector<fbcsp::Session> strong_sessions(int n_sessions, int n_trials = 16,
                                                   std::uint64_t seed = 1234) {
  return fbcsp::synth_subject(strong_config(n_sessions, n_trials, seed), 0);
}

inline fbcsp::FilterBankSpec small_spec() { return fbcsp::default_filter_bank(128.0); }

}  // namespace testdata
