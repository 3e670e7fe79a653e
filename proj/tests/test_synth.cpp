#include "fbcsp/synth.hpp"

#include "testdata.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace fbcsp;

TEST_CASE("generation is bit-identical for identical seeds", "[synth]") {
  const SynthConfig cfg = testdata::strong_config(2, 8);
  const auto a = synth_subject(cfg, 3);
  const auto b = synth_subject(cfg, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    REQUIRE(a[k].trials.size() == b[k].trials.size());
    for (std::size_t t = 0; t < a[k].trials.size(); ++t) {
      CHECK(a[k].trials[t].label == b[k].trials[t].label);
      CHECK(a[k].trials[t].samples == b[k].trials[t].samples);
    }
  }

  const auto c = synth_subject(cfg, 4);  // different subject differs
  bool any_diff = false;
  for (std::size_t t = 0; t < a[0].trials.size() && !any_diff; ++t) {
    any_diff = a[0].trials[t].samples != c[0].trials[t].samples;
  }
  CHECK(any_diff);
}

TEST_CASE("sessions carry valid structure and balanced labels", "[synth]") {
  SynthConfig cfg;
  cfg.n_sessions = 3;
  cfg.n_trials = 40;
  cfg.seed = 42;
  const auto sessions = synth_subject(cfg, 0);
  REQUIRE(sessions.size() == 3);
  for (const Session& s : sessions) {
    CHECK_NOTHROW(validate_session(s));
    CHECK(s.fs_hz == 256.0);
    CHECK(s.channel_names.size() == 11);
    CHECK(s.trials.size() == 40);
    CHECK(s.trials.front().samples.rows() == 1280);
    int walk = 0;
    for (const Trial& t : s.trials) walk += t.label == kClassWalk ? 1 : 0;
    CHECK(walk == 20);
  }
  CHECK(sessions[0].session_index == 1);
  CHECK(sessions[2].session_index == 3);
}

TEST_CASE("walk trials lose mu-band power by about the configured depth", "[synth]") {
  SynthConfig cfg;
  cfg.n_sessions = 1;
  cfg.n_trials = 40;
  cfg.erd_depth = 0.5;
  cfg.noise_level = 0.5;
  cfg.seed = 42;
  const auto sessions = synth_subject(cfg, 0);
  const int probe = synth_mu_peak_channel(cfg);

  const IirFilter mu_band = design_bandpass(8.0, 13.0, cfg.fs_hz);
  double walk_power = 0.0, rest_power = 0.0;
  int n_walk = 0, n_rest = 0;
  for (const Trial& t : sessions[0].trials) {
    const Mat filtered = apply_filter(mu_band, t.samples);
    const Vec col = filtered.col(probe);
    const double power = (col.array() - col.mean()).square().mean();
    if (t.label == kClassWalk) {
      walk_power += power;
      ++n_walk;
    } else {
      rest_power += power;
      ++n_rest;
    }
  }
  walk_power /= n_walk;
  rest_power /= n_rest;

  const double ratio = walk_power / rest_power;
  CHECK(ratio < 1.0);
  CHECK(ratio == Catch::Approx(1.0 - cfg.erd_depth).epsilon(0.2));
}

TEST_CASE("erd depth zero removes the class contrast", "[synth]") {
  SynthConfig cfg;
  cfg.n_sessions = 1;
  cfg.n_trials = 30;
  cfg.erd_depth = 0.0;
  cfg.seed = 9;
  const auto sessions = synth_subject(cfg, 0);
  const int probe = synth_mu_peak_channel(cfg);

  const IirFilter mu_band = design_bandpass(8.0, 13.0, cfg.fs_hz);
  double walk_power = 0.0, rest_power = 0.0;
  int n_walk = 0, n_rest = 0;
  for (const Trial& t : sessions[0].trials) {
    const Mat filtered = apply_filter(mu_band, t.samples);
    const Vec col = filtered.col(probe);
    const double power = (col.array() - col.mean()).square().mean();
    (t.label == kClassWalk ? walk_power : rest_power) += power;
    (t.label == kClassWalk ? n_walk : n_rest) += 1;
  }
  CHECK(walk_power / n_walk == Catch::Approx(rest_power / n_rest).epsilon(0.25));
}

TEST_CASE("mixing drift accumulates across sessions", "[synth]") {
  SynthConfig cfg;
  cfg.n_sessions = 14;
  cfg.drift_strength = 0.05;
  cfg.seed = 42;

  const std::vector<Mat> mixings = synth_mixing_sequence(cfg, 0);
  REQUIRE(mixings.size() == 14);
  const double drift2 = (mixings[1] - mixings[0]).norm();
  const double drift14 = (mixings[13] - mixings[0]).norm();
  CHECK(drift2 > 0.0);
  CHECK(drift14 > drift2);

  SynthConfig no_drift = cfg;
  no_drift.drift_strength = 0.0;
  const std::vector<Mat> fixed = synth_mixing_sequence(no_drift, 0);
  CHECK((fixed[13] - fixed[0]).norm() == 0.0);
}

TEST_CASE("config validation rejects out-of-range values", "[synth]") {
  SynthConfig cfg;
  cfg.erd_depth = 1.0;
  CHECK_THROWS(validate_synth_config(cfg));
  cfg.erd_depth = -0.1;
  CHECK_THROWS(validate_synth_config(cfg));
  cfg = SynthConfig{};
  cfg.drift_strength = -1.0;
  CHECK_THROWS(validate_synth_config(cfg));
  cfg = SynthConfig{};
  cfg.n_trials = 2;
  CHECK_THROWS(validate_synth_config(cfg));
}
