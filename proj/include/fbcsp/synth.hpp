#pragma once

#include "fbcsp/filters.hpp"
#include "fbcsp/rng.hpp"
#include "fbcsp/session.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace fbcsp {

// Desk-scale surrogate for multi-session motor-imagery recordings.
//
// Generative model: one mu-band (~11 Hz band-limited noise) latent source
// whose variance is attenuated by (1 - erd_depth) during "walk" trials
// (event-related desynchronization), a few strong label-independent mu-band
// distractor sources (posterior-alpha-like interference), and broadband
// 1/f-like background sources; channels = A_k * sources + white sensor
// noise. The mixing matrix drifts across sessions as
// A_k = A_1 + drift_strength * random walk. Cancelling the interference
// takes well-estimated spatial filters, so calibration accuracy rises
// steeply with training-set size; that, plus the drift, is what makes
// single-session calibration with few trials hard and inter-session
// transfer worthwhile.
struct SynthConfig {
  int n_subjects = 7;
  int n_sessions = 14;
  int n_trials = 40;
  double fs_hz = 256.0;
  int n_channels = 11;
  double trial_seconds = 5.0;
  double erd_depth = 0.45;        // fractional mu-power attenuation during walk
  double drift_strength = 0.005;  // per-session mixing perturbation scale
  double noise_level = 0.8;       // sensor noise standard deviation
  std::uint64_t seed = 42;
};

inline void validate_synth_config(const SynthConfig& cfg) {
  if (cfg.n_subjects < 1 || cfg.n_sessions < 1) {
    throw std::invalid_argument("synth: need at least one subject and session");
  }
  if (cfg.n_trials < 4) throw std::invalid_argument("synth: need at least 4 trials per session");
  if (cfg.n_channels < 2) throw std::invalid_argument("synth: need at least 2 channels");
  if (!(cfg.fs_hz >= 64.0)) throw std::invalid_argument("synth: fs must be >= 64 Hz");
  if (!(cfg.trial_seconds > 0.5)) throw std::invalid_argument("synth: trial too short");
  if (!(cfg.erd_depth >= 0.0 && cfg.erd_depth < 1.0)) {
    throw std::invalid_argument("synth: erd_depth must lie in [0, 1)");
  }
  if (cfg.drift_strength < 0.0) throw std::invalid_argument("synth: drift_strength must be >= 0");
  if (cfg.noise_level < 0.0) throw std::invalid_argument("synth: noise_level must be >= 0");
}

namespace detail {

constexpr double kMuLowHz = 9.0;
constexpr double kMuHighHz = 13.0;
constexpr double kMuGain = 1.0;           // mu loading at its peak channel
constexpr double kPinkGain = 0.35;        // per-entry 1/f background loading
constexpr double kDistractorLoad = 3.0;   // column norm of each mu-band distractor source
constexpr double kDistractorPeakAtten = 0.25;  // distractor leakage onto the mu peak channel
constexpr double kTrialJitter = 0.10;     // log-amplitude sd of trial-to-trial source power

inline int n_distractors(int n_channels) { return std::min(3, n_channels - 2); }

// Seed-stream tags so the mixing matrix, the drift walk and the trial data
// come from independent deterministic streams.
constexpr std::uint64_t kStreamMixing = 0x6d697831ULL;
constexpr std::uint64_t kStreamDrift = 0x64726674ULL;
constexpr std::uint64_t kStreamSession = 0x73657373ULL;

// var(white -> filter) = sum of squared impulse response.
inline double impulse_energy(const IirFilter& f, int n_samples = 4096) {
  std::vector<double> buf(static_cast<std::size_t>(n_samples), 0.0);
  buf[0] = 1.0;
  for (const SosSection& s : f.sections) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : buf) {
      const double in = v;
      const double y = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * y + z2;
      z2 = s.b2 * in - s.a2 * y;
      v = y;
    }
  }
  double e = 0.0;
  for (double v : buf) e += v * v;
  return e;
}

// Unit-variance band-limited noise column: white noise through the mu-band
// filter, lead-in dropped, normalized by the filter's energy gain.
inline Vec mu_noise(Rng& rng, const IirFilter& filt, double inv_sqrt_energy, Eigen::Index n) {
  const Eigen::Index lead = 4 * static_cast<Eigen::Index>(std::ceil(filt.fs_hz / kMuLowHz));
  std::vector<double> buf(static_cast<std::size_t>(lead + n));
  for (double& v : buf) v = rng.next_gaussian();
  for (const SosSection& s : filt.sections) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : buf) {
      const double in = v;
      const double y = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * y + z2;
      z2 = s.b2 * in - s.a2 * y;
      v = y;
    }
  }
  Vec out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = buf[static_cast<std::size_t>(lead + i)] * inv_sqrt_energy;
  return out;
}

// Unit-variance 1/f-like noise: equal mix of three stationary AR(1)
// processes with staggered poles. Stationary initialization, no burn-in.
inline Vec pink_noise(Rng& rng, Eigen::Index n) {
  constexpr double kPoles[3] = {0.98, 0.90, 0.60};
  Vec out = Vec::Zero(n);
  for (double a : kPoles) {
    const double drive = std::sqrt(1.0 - a * a);
    double s = rng.next_gaussian();
    out(0) += s;
    for (Eigen::Index i = 1; i < n; ++i) {
      s = a * s + drive * rng.next_gaussian();
      out(i) += s;
    }
  }
  return out / std::sqrt(3.0);
}

inline std::vector<std::string> montage_names(int n_channels) {
  if (n_channels == 11) {
    return {"F3", "Fz", "F4", "T3", "C3", "Cz", "C4", "T4", "P3", "Pz", "P4"};
  }
  std::vector<std::string> names;
  for (int i = 0; i < n_channels; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "ch%02d", i + 1);
    names.emplace_back(buf);
  }
  return names;
}

}  // namespace detail

// Channel index with the strongest mu loading in the base mixing matrix;
// exposed so diagnostics can probe the ERD contrast where it is largest.
inline int synth_mu_peak_channel(const SynthConfig& cfg) {
  return cfg.n_channels == 11 ? 5 : cfg.n_channels / 2;  // Cz on the paper montage
}

// Base mixing matrix A_1 (channels x sources). Source 0 is the mu source
// with a fixed spatial bump over the peak channel. The next few sources are
// strong mu-band distractors (posterior-alpha-like interference): their
// topographies cover most channels but barely touch the mu peak, so the
// per-channel ERD contrast survives there while good spatial filters have to
// be learned everywhere else. Remaining sources are the 1/f floor.
inline Mat synth_base_mixing(const SynthConfig& cfg, std::uint64_t subject_seed) {
  Rng rng(mix_seed(cfg.seed, subject_seed, detail::kStreamMixing));
  const int n_ch = cfg.n_channels;
  const int peak = synth_mu_peak_channel(cfg);
  const int n_dist = detail::n_distractors(n_ch);
  Mat a(n_ch, n_ch);
  for (int i = 0; i < n_ch; ++i) {
    const double d = (i - peak) / 1.5;
    a(i, 0) = detail::kMuGain * std::exp(-0.5 * d * d);
  }
  for (int j = 1; j <= n_dist; ++j) {
    Vec topo(n_ch);
    for (int i = 0; i < n_ch; ++i) topo(i) = rng.next_gaussian();
    topo *= detail::kDistractorLoad / topo.norm();
    topo(peak) *= detail::kDistractorPeakAtten;
    a.col(j) = topo;
  }
  for (int j = n_dist + 1; j < n_ch; ++j) {
    for (int i = 0; i < n_ch; ++i) a(i, j) = detail::kPinkGain * rng.next_gaussian();
  }
  return a;
}

// Per-session mixing matrices A_1 .. A_n: A_k = A_1 + drift * W_k where W_k
// is a Gaussian random walk with W_1 = 0. Exposed so tests and diagnostics
// can inspect the session-to-session non-stationarity directly.
inline std::vector<Mat> synth_mixing_sequence(const SynthConfig& cfg,
                                              std::uint64_t subject_seed) {
  validate_synth_config(cfg);
  const int n_ch = cfg.n_channels;
  const Mat base_mixing = synth_base_mixing(cfg, subject_seed);
  Rng drift_rng(mix_seed(cfg.seed, subject_seed, detail::kStreamDrift));
  Mat walk = Mat::Zero(n_ch, n_ch);

  std::vector<Mat> mixings;
  mixings.reserve(static_cast<std::size_t>(cfg.n_sessions));
  for (int k = 1; k <= cfg.n_sessions; ++k) {
    if (k > 1) {
      for (int i = 0; i < n_ch; ++i) {
        for (int j = 0; j < n_ch; ++j) walk(i, j) += drift_rng.next_gaussian();
      }
    }
    mixings.push_back(base_mixing + cfg.drift_strength * walk);
  }
  return mixings;
}

// All sessions of one synthetic subject. Fully determined by
// (cfg.seed, subject_seed).
inline std::vector<Session> synth_subject(const SynthConfig& cfg, std::uint64_t subject_seed) {
  validate_synth_config(cfg);

  const auto n_samples = static_cast<Eigen::Index>(std::llround(cfg.trial_seconds * cfg.fs_hz));
  const int n_ch = cfg.n_channels;
  const IirFilter mu_filter = design_bandpass(detail::kMuLowHz, detail::kMuHighHz, cfg.fs_hz);
  const double inv_sqrt_energy = 1.0 / std::sqrt(detail::impulse_energy(mu_filter));
  const std::vector<Mat> mixings = synth_mixing_sequence(cfg, subject_seed);

  char subject_name[16];
  std::snprintf(subject_name, sizeof(subject_name), "sub%02d",
                static_cast<int>(subject_seed) + 1);

  std::vector<Session> sessions;
  sessions.reserve(static_cast<std::size_t>(cfg.n_sessions));
  for (int k = 1; k <= cfg.n_sessions; ++k) {
    const Mat& mixing = mixings[static_cast<std::size_t>(k - 1)];

    Session s;
    s.subject_id = subject_name;
    s.session_index = k;
    s.fs_hz = cfg.fs_hz;
    s.channel_names = detail::montage_names(n_ch);

    Rng rng(mix_seed(cfg.seed, subject_seed,
                     detail::kStreamSession + static_cast<std::uint64_t>(k)));
    std::vector<int> labels(static_cast<std::size_t>(cfg.n_trials), kClassRest);
    for (int i = 0; i < cfg.n_trials / 2; ++i) labels[static_cast<std::size_t>(i)] = kClassWalk;
    rng.shuffle(labels);

    const double walk_scale = std::sqrt(1.0 - cfg.erd_depth);
    const int n_dist = detail::n_distractors(n_ch);
    for (int t = 0; t < cfg.n_trials; ++t) {
      // Every source's power jitters mildly from trial to trial (vigilance
      // and performance variability), independently of the label.
      const auto jitter = [&] { return std::exp(detail::kTrialJitter * rng.next_gaussian()); };

      Mat sources(n_samples, n_ch);
      Vec mu = detail::mu_noise(rng, mu_filter, inv_sqrt_energy, n_samples) * jitter();
      if (labels[static_cast<std::size_t>(t)] == kClassWalk) mu *= walk_scale;
      sources.col(0) = mu;
      for (int j = 1; j <= n_dist; ++j) {
        sources.col(j) =
            detail::mu_noise(rng, mu_filter, inv_sqrt_energy, n_samples) * jitter();
      }
      for (int j = n_dist + 1; j < n_ch; ++j) {
        sources.col(j) = detail::pink_noise(rng, n_samples) * jitter();
      }

      Trial trial;
      trial.label = labels[static_cast<std::size_t>(t)];
      trial.samples = sources * mixing.transpose();
      for (Eigen::Index r = 0; r < n_samples; ++r) {
        for (int c = 0; c < n_ch; ++c) {
          trial.samples(r, c) += cfg.noise_level * rng.next_gaussian();
        }
      }
      s.trials.push_back(std::move(trial));
    }
    sessions.push_back(std::move(s));
  }
  return sessions;
}

// One call per subject, subject_seed = 0 .. n_subjects-1.
inline std::vector<std::vector<Session>> synth_study(const SynthConfig& cfg) {
  validate_synth_config(cfg);
  std::vector<std::vector<Session>> subjects;
  subjects.reserve(static_cast<std::size_t>(cfg.n_subjects));
  for (int s = 0; s < cfg.n_subjects; ++s) {
    subjects.push_back(synth_subject(cfg, static_cast<std::uint64_t>(s)));
  }
  return subjects;
}

}  // namespace fbcsp
