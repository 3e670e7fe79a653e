#pragma once

#include "fbcsp/session.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

namespace fbcsp {

namespace detail {

// Shortest decimal form that parses back to the identical double. Keeps the
// trial CSVs human-readable while making save -> load the identity.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& context) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::runtime_error(context + ": failed to parse number '" + std::string(text) + "'");
  }
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::string trim_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace detail

// Reads one trial CSV: first row = channel names, subsequent rows = samples
// in acquisition order.
inline Mat load_trial_csv(const std::filesystem::path& path,
                          const std::vector<std::string>& expected_channels) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("dataio: cannot open trial file " + path.string());

  const std::string context = "dataio: " + path.filename().string();
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(context + ": empty trial file");
  const auto header = detail::split_csv_line(detail::trim_cr(line));
  if (header.size() != expected_channels.size()) {
    throw std::runtime_error(context + ": trial channel count mismatch");
  }
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] != expected_channels[i]) {
      throw std::runtime_error(context + ": trial channel names disagree with manifest");
    }
  }

  std::vector<double> values;
  Eigen::Index rows = 0;
  const auto n_ch = static_cast<Eigen::Index>(expected_channels.size());
  while (std::getline(in, line)) {
    line = detail::trim_cr(line);
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (static_cast<Eigen::Index>(cells.size()) != n_ch) {
      throw std::runtime_error(context + ": row with wrong column count");
    }
    for (const auto& c : cells) values.push_back(detail::parse_double(c, context));
    ++rows;
  }
  if (rows == 0) throw std::runtime_error(context + ": trial has no samples");

  Mat samples(rows, n_ch);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < n_ch; ++c) samples(r, c) = values[r * n_ch + c];
  }
  return samples;
}

// Loads a session from its JSON manifest. All session invariants are
// validated; any violation throws.
inline Session load_session(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("dataio: cannot open manifest " + manifest_path.string());

  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("dataio: malformed manifest " + manifest_path.string() + ": " + e.what());
  }

  Session s;
  try {
    s.subject_id = j.at("subject_id").get<std::string>();
    s.session_index = j.at("session_index").get<int>();
    s.fs_hz = j.at("fs_hz").get<double>();
    s.channel_names = j.at("channel_names").get<std::vector<std::string>>();
    const auto& trials = j.at("trials");
    if (!trials.is_array()) throw std::runtime_error("dataio: 'trials' must be an array");
    const auto dir = manifest_path.parent_path();
    for (const auto& t : trials) {
      Trial trial;
      trial.label = class_id(t.at("label").get<std::string>());
      const auto file = t.at("file").get<std::string>();
      trial.samples = load_trial_csv(dir / file, s.channel_names);
      s.trials.push_back(std::move(trial));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("dataio: malformed manifest " + manifest_path.string() + ": " + e.what());
  }

  validate_session(s);
  return s;
}

// Writes manifest + one CSV per trial into dir; load_session inverts it
// bit-exactly. Refuses to write into an existing directory unless overwrite
// is set.
inline std::filesystem::path save_session(const Session& s, const std::filesystem::path& dir,
                                          bool overwrite = false) {
  validate_session(s);
  namespace fs = std::filesystem;
  if (fs::exists(dir)) {
    if (!overwrite) throw std::runtime_error("dataio: directory exists: " + dir.string());
  } else {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("dataio: cannot create directory " + dir.string());
  }
  for (const auto& name : s.channel_names) {
    if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos) {
      throw std::runtime_error("dataio: channel name not representable in CSV: '" + name + "'");
    }
  }

  nlohmann::json manifest;
  manifest["subject_id"] = s.subject_id;
  manifest["session_index"] = s.session_index;
  manifest["fs_hz"] = s.fs_hz;
  manifest["channel_names"] = s.channel_names;
  manifest["trials"] = nlohmann::json::array();

  for (std::size_t i = 0; i < s.trials.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "trial_%04zu.csv", i);
    const fs::path trial_path = dir / name;
    std::ofstream out(trial_path);
    if (!out) throw std::runtime_error("dataio: cannot write " + trial_path.string());

    for (std::size_t c = 0; c < s.channel_names.size(); ++c) {
      if (c) out << ',';
      out << s.channel_names[c];
    }
    out << '\n';
    const Mat& x = s.trials[i].samples;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      for (Eigen::Index c = 0; c < x.cols(); ++c) {
        if (c) out << ',';
        out << detail::format_double(x(r, c));
      }
      out << '\n';
    }
    if (!out) throw std::runtime_error("dataio: write failure on " + trial_path.string());

    manifest["trials"].push_back({{"label", class_name(s.trials[i].label)}, {"file", name}});
  }

  const fs::path manifest_path = dir / "manifest.json";
  std::ofstream out(manifest_path);
  if (!out) throw std::runtime_error("dataio: cannot write " + manifest_path.string());
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("dataio: write failure on " + manifest_path.string());
  return manifest_path;
}

}  // namespace fbcsp
