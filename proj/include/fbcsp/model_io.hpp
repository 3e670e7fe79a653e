#pragma once

#include "fbcsp/pipeline.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>

namespace fbcsp {

constexpr int kModelFileVersion = 1;

namespace detail {

inline nlohmann::json mat_to_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Mat mat_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw std::runtime_error("model file: expected a matrix");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw std::runtime_error("model file: ragged matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

inline nlohmann::json vec_to_json(const Vec& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Vec vec_from_json(const nlohmann::json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

inline nlohmann::json spec_to_json(const FilterBankSpec& spec) {
  nlohmann::json j;
  j["fs_hz"] = spec.fs_hz;
  j["bands"] = nlohmann::json::array();
  for (const auto& [lo, hi] : spec.bands) j["bands"].push_back({lo, hi});
  j["windows"] = nlohmann::json::array();
  for (const auto& [s, e] : spec.windows) j["windows"].push_back({s, e});
  return j;
}

inline FilterBankSpec spec_from_json(const nlohmann::json& j) {
  FilterBankSpec spec;
  spec.fs_hz = j.at("fs_hz").get<double>();
  for (const auto& b : j.at("bands")) spec.bands.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
  for (const auto& w : j.at("windows")) spec.windows.push_back({w.at(0).get<double>(), w.at(1).get<double>()});
  return spec;
}

inline nlohmann::json fbcsp_to_json(const FbcspModel& model) {
  nlohmann::json j;
  j["spec"] = spec_to_json(model.spec);
  j["m"] = model.m;
  j["csp_cells"] = nlohmann::json::array();
  for (const CspModel& cell : model.csp_cells) {
    j["csp_cells"].push_back({{"band", {cell.band.first, cell.band.second}},
                              {"window", {cell.window.first, cell.window.second}},
                              {"filters", mat_to_json(cell.filters)}});
  }
  j["lda"] = {{"mean0", vec_to_json(model.lda.mean0)},
              {"mean1", vec_to_json(model.lda.mean1)},
              {"covariance_cholesky", mat_to_json(model.lda.covariance_cholesky)},
              {"gamma", model.lda.shrinkage_gamma},
              {"feature_dim", model.lda.feature_dim}};
  return j;
}

inline FbcspModel fbcsp_from_json(const nlohmann::json& j) {
  FbcspModel model;
  model.spec = spec_from_json(j.at("spec"));
  model.m = j.at("m").get<int>();
  for (const auto& cj : j.at("csp_cells")) {
    CspModel cell;
    cell.band = {cj.at("band").at(0).get<double>(), cj.at("band").at(1).get<double>()};
    cell.window = {cj.at("window").at(0).get<double>(), cj.at("window").at(1).get<double>()};
    cell.filters = mat_from_json(cj.at("filters"));
    model.csp_cells.push_back(std::move(cell));
  }
  const auto& lj = j.at("lda");
  model.lda.mean0 = vec_from_json(lj.at("mean0"));
  model.lda.mean1 = vec_from_json(lj.at("mean1"));
  model.lda.covariance_cholesky = mat_from_json(lj.at("covariance_cholesky"));
  model.lda.shrinkage_gamma = lj.at("gamma").get<double>();
  model.lda.feature_dim = lj.at("feature_dim").get<int>();
  model.lda.finalize();
  return model;
}

}  // namespace detail

// Versioned JSON model file. All matrices are stored as nested arrays in
// shortest round-trip decimal form, so save -> load -> save is byte-stable
// and a loaded model predicts bit-identically to the in-memory one.
inline void save_model(const MsFbcspModel& model, const std::filesystem::path& path) {
  nlohmann::json j = detail::fbcsp_to_json(model.current);
  j["version"] = kModelFileVersion;
  j["class_order"] = {class_name(kClassWalk), class_name(kClassRest)};
  j["k"] = model.k;
  j["history_sessions_used"] = model.history_sessions_used;
  if (model.prior) j["prior"] = detail::fbcsp_to_json(*model.prior);

  std::ofstream out(path);
  if (!out) throw std::runtime_error("model file: cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("model file: write failure on " + path.string());
}

inline MsFbcspModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("model file: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("model file: corrupt " + path.string() + ": " + e.what());
  }

  try {
    const int version = j.at("version").get<int>();
    if (version != kModelFileVersion) {
      throw std::runtime_error("model file: unsupported version " + std::to_string(version));
    }
    MsFbcspModel model;
    model.current = detail::fbcsp_from_json(j);
    model.k = j.at("k").get<int>();
    model.history_sessions_used = j.at("history_sessions_used").get<std::vector<int>>();
    if (j.contains("prior")) model.prior = detail::fbcsp_from_json(j.at("prior"));
    if (model.prior.has_value() == (model.k == 1)) {
      throw std::runtime_error("model file: prior presence inconsistent with k");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("model file: corrupt " + path.string() + ": " + e.what());
  }
}

}  // namespace fbcsp
