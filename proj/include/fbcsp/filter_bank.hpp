#pragma once

#include "fbcsp/filters.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fbcsp {

// Band list and trial time windows that define the filter-bank grid.
// Every (band, window) cell gets its own spatial-filter model.
struct FilterBankSpec {
  std::vector<std::pair<double, double>> bands;    // Hz
  std::vector<std::pair<double, double>> windows;  // seconds from stimulus onset
  double fs_hz = 256.0;
};

inline void validate_spec(const FilterBankSpec& spec) {
  if (!(spec.fs_hz > 0)) throw std::runtime_error("filterbank: sampling rate must be positive");
  if (spec.bands.empty()) throw std::runtime_error("filterbank: no bands");
  if (spec.windows.empty()) throw std::runtime_error("filterbank: no windows");
  for (const auto& [lo, hi] : spec.bands) {
    if (!(lo > 0 && lo < hi && hi < spec.fs_hz / 2)) {
      throw std::runtime_error("filterbank: band edges must satisfy 0 < low < high < fs/2");
    }
  }
  for (const auto& [start, end] : spec.windows) {
    if (!(start >= 0 && start < end)) {
      throw std::runtime_error("filterbank: window must satisfy 0 <= start < end");
    }
  }
}

// The default grid: six 6 Hz-wide sub-bands stepping by 4 Hz (2 Hz overlap)
// across 6-32 Hz, plus the full 6-32 Hz band as the seventh, crossed with
// three overlapping 2 s windows that skip the first 0.5 s after onset.
inline FilterBankSpec default_filter_bank(double fs_hz) {
  if (!(fs_hz > 64.0)) {
    throw std::invalid_argument("filterbank: default bank needs fs > 64 Hz");
  }
  FilterBankSpec spec;
  spec.fs_hz = fs_hz;
  for (double lo = 6.0; lo + 6.0 <= 32.0; lo += 4.0) spec.bands.push_back({lo, lo + 6.0});
  spec.bands.push_back({6.0, 32.0});
  spec.windows = {{0.5, 2.5}, {1.5, 3.5}, {2.5, 4.5}};
  return spec;
}

// Rows floor(start*fs) .. floor(end*fs)-1 of the trial.
inline Mat extract_window(const Mat& trial_samples, std::pair<double, double> window,
                          double fs_hz) {
  const auto [start_s, end_s] = window;
  if (!(start_s >= 0.0 && start_s < end_s)) {
    throw std::invalid_argument("dsp: window must satisfy 0 <= start < end");
  }
  const auto first = static_cast<Eigen::Index>(std::floor(start_s * fs_hz));
  const auto last = static_cast<Eigen::Index>(std::floor(end_s * fs_hz));  // exclusive
  if (last > trial_samples.rows()) {
    throw std::invalid_argument("dsp: window out of trial bounds");
  }
  if (last - first < 2) throw std::invalid_argument("dsp: window too short");
  return trial_samples.middleRows(first, last - first);
}

}  // namespace fbcsp
