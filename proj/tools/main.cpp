// Command-line front door: synthetic data generation, model training and
// prediction, the multi-subject evaluation study, and the published-table
// consistency check.

#include "fbcsp/evaluation.hpp"
#include "fbcsp/model_io.hpp"
#include "fbcsp/paper_check.hpp"
#include "fbcsp/session_io.hpp"
#include "fbcsp/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Optional JSON config mirroring FilterBankSpec / SynthConfig field names.
// Values act as defaults; explicit command-line flags win.
struct FileConfig {
  std::optional<std::vector<std::pair<double, double>>> bands;
  std::optional<std::vector<std::pair<double, double>>> windows;
  std::optional<int> m;
  json synth;  // object with SynthConfig field names, may be empty
};

FileConfig load_file_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cli: cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("cli: malformed config file " + path + ": " + e.what());
  }

  FileConfig cfg;
  const auto read_pairs = [](const json& arr, const char* what) {
    std::vector<std::pair<double, double>> out;
    if (!arr.is_array()) throw std::runtime_error(std::string("cli: config ") + what + " must be an array");
    for (const auto& p : arr) {
      if (!p.is_array() || p.size() != 2) {
        throw std::runtime_error(std::string("cli: config ") + what + " entries must be [lo, hi]");
      }
      out.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    return out;
  };
  for (const auto& [key, value] : j.items()) {
    if (key == "bands") cfg.bands = read_pairs(value, "bands");
    else if (key == "windows") cfg.windows = read_pairs(value, "windows");
    else if (key == "m") cfg.m = value.get<int>();
    else if (key == "synth") cfg.synth = value;
    else throw std::runtime_error("cli: unknown config key '" + key + "'");
  }
  if (!cfg.synth.is_null() && !cfg.synth.is_object()) {
    throw std::runtime_error("cli: config 'synth' must be an object");
  }
  return cfg;
}

void apply_synth_config(const json& j, fbcsp::SynthConfig& cfg, const CLI::App& cmd) {
  const auto set_if_default = [&](const char* flag, auto& field) {
    // flags beat config; config beats built-in defaults
    const CLI::Option* opt = cmd.get_option(flag);
    const char* key = flag + 2;  // strip "--"
    if (j.contains(key) && (opt == nullptr || opt->count() == 0)) {
      field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    }
  };
  if (j.is_null()) return;
  for (const auto& [key, value] : j.items()) {
    (void)value;
    static const std::vector<std::string> known = {
        "n_subjects", "n_sessions", "n_trials",       "fs_hz",       "n_channels",
        "trial_seconds", "erd_depth", "drift_strength", "noise_level", "seed"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::runtime_error("cli: unknown synth config key '" + key + "'");
    }
  }
  set_if_default("--subjects", cfg.n_subjects);
  // map remaining keys manually (flag/key names differ)
  const CLI::App& c = cmd;
  auto flag_unset = [&](const char* flag) {
    const CLI::Option* opt = c.get_option(flag);
    return opt == nullptr || opt->count() == 0;
  };
  if (j.contains("n_sessions") && flag_unset("--sessions")) cfg.n_sessions = j.at("n_sessions").get<int>();
  if (j.contains("n_trials") && flag_unset("--trials")) cfg.n_trials = j.at("n_trials").get<int>();
  if (j.contains("fs_hz") && flag_unset("--fs")) cfg.fs_hz = j.at("fs_hz").get<double>();
  if (j.contains("n_channels") && flag_unset("--channels")) cfg.n_channels = j.at("n_channels").get<int>();
  if (j.contains("trial_seconds") && flag_unset("--trial-seconds")) {
    cfg.trial_seconds = j.at("trial_seconds").get<double>();
  }
  if (j.contains("erd_depth") && flag_unset("--erd-depth")) cfg.erd_depth = j.at("erd_depth").get<double>();
  if (j.contains("drift_strength") && flag_unset("--drift")) {
    cfg.drift_strength = j.at("drift_strength").get<double>();
  }
  if (j.contains("noise_level") && flag_unset("--noise")) cfg.noise_level = j.at("noise_level").get<double>();
  if (j.contains("seed") && flag_unset("--seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
}

fbcsp::FilterBankSpec make_spec(double fs_hz, const FileConfig& cfg) {
  fbcsp::FilterBankSpec spec = fbcsp::default_filter_bank(fs_hz);
  if (cfg.bands) spec.bands = *cfg.bands;
  if (cfg.windows) spec.windows = *cfg.windows;
  fbcsp::validate_spec(spec);
  return spec;
}

int run_simulate(const fbcsp::SynthConfig& cfg, const std::string& out_dir, bool overwrite) {
  const auto subjects = fbcsp::synth_study(cfg);
  for (std::size_t s = 0; s < subjects.size(); ++s) {
    for (const fbcsp::Session& session : subjects[s]) {
      char leaf[32];
      std::snprintf(leaf, sizeof(leaf), "session%02d", session.session_index);
      const fs::path dir = fs::path(out_dir) / session.subject_id / leaf;
      const fs::path manifest = fbcsp::save_session(session, dir, overwrite);
      std::cout << manifest.string() << '\n';
    }
  }
  return 0;
}

int run_train(const std::string& current_path, std::vector<std::string> history_paths,
              const std::string& out_path, int m, const FileConfig& file_cfg) {
  const fbcsp::Session current = fbcsp::load_session(current_path);

  std::vector<fbcsp::Session> history;
  for (const auto& p : history_paths) history.push_back(fbcsp::load_session(p));
  std::sort(history.begin(), history.end(),
            [](const fbcsp::Session& a, const fbcsp::Session& b) {
              return a.session_index < b.session_index;
            });
  if (history.size() > 4) {
    std::cerr << "warning: " << history.size()
              << " history sessions given; only the most recent 4 will be used\n";
  }

  const fbcsp::FilterBankSpec spec = make_spec(current.fs_hz, file_cfg);
  const fbcsp::MsFbcspModel model = fbcsp::train_msfbcsp(current, history, spec, m);
  fbcsp::save_model(model, out_path);
  std::cout << out_path << '\n';
  return 0;
}

int run_predict(const std::string& model_path, const std::string& session_path,
                const std::string& out_path) {
  const fbcsp::MsFbcspModel model = fbcsp::load_model(model_path);
  const fbcsp::Session session = fbcsp::load_session(session_path);

  const fbcsp::Mat probs = fbcsp::predict_msfbcsp(model, session.trials);
  const std::vector<int> decisions = fbcsp::decide(probs);
  std::vector<int> truth;
  for (const fbcsp::Trial& t : session.trials) truth.push_back(t.label);

  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cli: cannot write " + out_path);
    out << "p_walk,p_rest,decision,label\n";
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
      out << fbcsp::detail::format_double(probs(i, 0)) << ','
          << fbcsp::detail::format_double(probs(i, 1)) << ','
          << fbcsp::class_name(decisions[static_cast<std::size_t>(i)]) << ','
          << fbcsp::class_name(truth[static_cast<std::size_t>(i)]) << '\n';
    }
  }
  std::printf("accuracy: %.1f%% (%zu trials)\n",
              fbcsp::display_round(fbcsp::accuracy(decisions, truth)), truth.size());
  return 0;
}

std::vector<std::vector<fbcsp::Session>> load_study_data(const std::string& data_dir) {
  std::vector<fs::path> subject_dirs;
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    if (entry.is_directory()) subject_dirs.push_back(entry.path());
  }
  std::sort(subject_dirs.begin(), subject_dirs.end());
  if (subject_dirs.empty()) throw std::runtime_error("cli: no subject directories in " + data_dir);

  std::vector<std::vector<fbcsp::Session>> subjects;
  for (const auto& sdir : subject_dirs) {
    std::vector<fs::path> manifests;
    for (const auto& entry : fs::recursive_directory_iterator(sdir)) {
      if (entry.is_regular_file() && entry.path().filename() == "manifest.json") {
        manifests.push_back(entry.path());
      }
    }
    std::sort(manifests.begin(), manifests.end());
    if (manifests.empty()) {
      throw std::runtime_error("cli: no session manifests under " + sdir.string());
    }
    std::vector<fbcsp::Session> sessions;
    for (const auto& m : manifests) sessions.push_back(fbcsp::load_session(m));
    std::sort(sessions.begin(), sessions.end(),
              [](const fbcsp::Session& a, const fbcsp::Session& b) {
                return a.session_index < b.session_index;
              });
    subjects.push_back(std::move(sessions));
  }
  return subjects;
}

int run_compare(const std::string& data_dir, const std::string& out_dir, std::uint64_t seed,
                int m, double train_fraction, int max_prior, const FileConfig& file_cfg) {
  const auto subjects = load_study_data(data_dir);

  fbcsp::StudyConfig cfg;
  cfg.spec = make_spec(subjects.front().front().fs_hz, file_cfg);
  cfg.m = m;
  cfg.train_fraction = train_fraction;
  cfg.max_prior = max_prior;
  cfg.seed = seed;

  const fbcsp::EvalReport report = fbcsp::run_study(subjects, cfg);

  fs::create_directories(out_dir);
  fbcsp::write_report_json(report, fs::path(out_dir) / "report.json");
  fbcsp::write_method_csv(report.msfbcsp, report.subject_ids, fs::path(out_dir) / "msfbcsp.csv");
  fbcsp::write_method_csv(report.single, report.subject_ids, fs::path(out_dir) / "single.csv");

  std::printf("msFBCSP pooled median %.1f (%.1f-%.1f)\n",
              fbcsp::display_round(report.msfbcsp.pooled.median),
              fbcsp::display_round(report.msfbcsp.pooled.min),
              fbcsp::display_round(report.msfbcsp.pooled.max));
  std::printf("single   pooled median %.1f (%.1f-%.1f)\n",
              fbcsp::display_round(report.single.pooled.median),
              fbcsp::display_round(report.single.pooled.min),
              fbcsp::display_round(report.single.pooled.max));
  std::printf("Wilcoxon signed-rank p = %.3g (n_eff = %d)\n", report.wilcoxon.p,
              report.wilcoxon.n_effective);
  return 0;
}

int run_paper_check() {
  const fbcsp::CheckReport report = fbcsp::paper_check();
  for (const fbcsp::CheckItem& item : report.items) {
    std::printf("%s: %s — %s\n", item.passed ? "PASS" : "FAIL", item.name.c_str(),
                item.detail.c_str());
  }
  std::printf("paper check: %s\n", report.all_passed ? "PASS" : "FAIL");
  return report.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filter-bank CSP motor-imagery calibration toolkit"};
  app.require_subcommand(1);

  std::string config_path;

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic multi-session EEG data");
  fbcsp::SynthConfig synth_cfg;
  std::string sim_out;
  bool sim_overwrite = false;
  simulate->add_option("--subjects", synth_cfg.n_subjects, "Number of subjects");
  simulate->add_option("--sessions", synth_cfg.n_sessions, "Sessions per subject");
  simulate->add_option("--trials", synth_cfg.n_trials, "Trials per session");
  simulate->add_option("--channels", synth_cfg.n_channels, "Channel count");
  simulate->add_option("--fs", synth_cfg.fs_hz, "Sampling rate in Hz");
  simulate->add_option("--trial-seconds", synth_cfg.trial_seconds, "Trial duration in seconds");
  simulate->add_option("--erd-depth", synth_cfg.erd_depth, "Mu-power attenuation during walk, [0,1)");
  simulate->add_option("--drift", synth_cfg.drift_strength, "Session-to-session mixing drift scale");
  simulate->add_option("--noise", synth_cfg.noise_level, "Sensor noise standard deviation");
  simulate->add_option("--seed", synth_cfg.seed, "Random seed");
  simulate->add_option("--out", sim_out, "Output data directory")->required();
  simulate->add_flag("--overwrite", sim_overwrite, "Allow writing into existing directories");
  simulate->add_option("--config", config_path, "JSON config file");

  // train
  auto* train = app.add_subcommand("train", "Train a model from session manifests");
  std::string train_current, train_out;
  std::vector<std::string> train_history;
  int train_m = 3;
  train->add_option("--current", train_current, "Current session manifest")->required();
  train->add_option("--history", train_history, "Prior session manifests (any number)");
  train->add_option("--out", train_out, "Output model file")->required();
  train->add_option("--m", train_m, "Spatial patterns per class");
  train->add_option("--config", config_path, "JSON config file");

  // predict
  auto* predict = app.add_subcommand("predict", "Classify a session with a trained model");
  std::string predict_model, predict_session, predict_out;
  predict->add_option("--model", predict_model, "Model file")->required();
  predict->add_option("--session", predict_session, "Session manifest")->required();
  predict->add_option("--out", predict_out, "Per-trial probability CSV");

  // compare (alias: evaluate)
  auto* compare = app.add_subcommand("compare",
                                     "Run the multi-session vs single-session study on a data tree");
  std::string cmp_data, cmp_out;
  std::uint64_t cmp_seed = 7;
  int cmp_m = 3;
  double cmp_train_fraction = 0.7;
  int cmp_max_prior = 4;
  compare->alias("evaluate");
  compare->add_option("--data", cmp_data, "Data directory (one subdirectory per subject)")->required();
  compare->add_option("--out", cmp_out, "Report output directory")->required();
  compare->add_option("--seed", cmp_seed, "Split seed");
  compare->add_option("--m", cmp_m, "Spatial patterns per class");
  compare->add_option("--train-fraction", cmp_train_fraction, "Training fraction of each session");
  compare->add_option("--max-prior", cmp_max_prior, "Maximum prior sessions pooled");
  compare->add_option("--config", config_path, "JSON config file");

  // paper-check
  auto* paper = app.add_subcommand("paper-check",
                                   "Verify the embedded accuracy tables against the published statistics");
  (void)paper;

  CLI11_PARSE(app, argc, argv);

  try {
    FileConfig file_cfg;
    if (!config_path.empty()) file_cfg = load_file_config(config_path);

    if (simulate->parsed()) {
      apply_synth_config(file_cfg.synth, synth_cfg, *simulate);
      fbcsp::validate_synth_config(synth_cfg);
      return run_simulate(synth_cfg, sim_out, sim_overwrite);
    }
    if (train->parsed()) {
      if (file_cfg.m && train->get_option("--m")->count() == 0) train_m = *file_cfg.m;
      return run_train(train_current, train_history, train_out, train_m, file_cfg);
    }
    if (predict->parsed()) return run_predict(predict_model, predict_session, predict_out);
    if (compare->parsed()) {
      if (file_cfg.m && compare->get_option("--m")->count() == 0) cmp_m = *file_cfg.m;
      return run_compare(cmp_data, cmp_out, cmp_seed, cmp_m, cmp_train_fraction, cmp_max_prior,
                         file_cfg);
    }
    return run_paper_check();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
