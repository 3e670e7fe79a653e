#pragma once

#include "fbcsp/paper_tables.hpp"
#include "fbcsp/stats.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace fbcsp {

struct CheckItem {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;
  bool all_passed = true;

  void add(const std::string& name, bool passed, const std::string& detail) {
    items.push_back({name, passed, detail});
    all_passed = all_passed && passed;
  }
};

namespace detail {

inline std::string summary_string(double median, double lo, double hi) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f (%.1f-%.1f)", median, lo, hi);
  return buf;
}

}  // namespace detail

// Recomputes every statistic the study reports from the embedded accuracy
// tables and compares against the printed values: the 14 per-subject
// "Median (range)" cells (+-0.1 to absorb the tables' one-decimal rounding),
// the two pooled medians (+-0.2) with exact ranges, and the paired Wilcoxon
// test (p < 0.001).
inline CheckReport paper_check() {
  const PaperTables tables = paper_tables();
  CheckReport report;

  const auto check_columns = [&](const Mat& table, const std::array<PrintedSummary, 7>& printed,
                                 const std::string& method) {
    for (int s = 0; s < 7; ++s) {
      std::vector<double> col;
      for (int r = 0; r < table.rows(); ++r) col.push_back(table(r, s));
      const MedianRange mr = median_range(col);
      const PrintedSummary& want = printed[static_cast<std::size_t>(s)];
      const bool ok = std::abs(mr.median - want.median) <= 0.1 &&
                      std::abs(mr.min - want.min) <= 0.1 && std::abs(mr.max - want.max) <= 0.1;
      report.add(method + " Sb." + std::to_string(s + 1) + " median (range)", ok,
                 detail::summary_string(mr.median, mr.min, mr.max) + " vs printed " +
                     detail::summary_string(want.median, want.min, want.max));
    }
  };
  check_columns(tables.msfbcsp, paper_printed_summary_msfbcsp(), "msFBCSP");
  check_columns(tables.single, paper_printed_summary_single(), "single");

  const auto check_pooled = [&](const Mat& table, const PrintedSummary& want,
                                const std::string& method) {
    std::vector<double> flat;
    for (int r = 0; r < table.rows(); ++r) {
      for (int c = 0; c < table.cols(); ++c) flat.push_back(table(r, c));
    }
    const MedianRange mr = median_range(flat);
    const bool ok = std::abs(mr.median - want.median) <= 0.2 && mr.min == want.min &&
                    mr.max == want.max;
    report.add(method + " pooled median (range)", ok,
               detail::summary_string(mr.median, mr.min, mr.max) + " vs printed " +
                   detail::summary_string(want.median, want.min, want.max));
  };
  check_pooled(tables.msfbcsp, paper_pooled_msfbcsp(), "msFBCSP");
  check_pooled(tables.single, paper_pooled_single(), "single");

  std::vector<double> ms, single;
  for (int r = 0; r < 14; ++r) {
    for (int c = 0; c < 7; ++c) {
      ms.push_back(tables.msfbcsp(r, c));
      single.push_back(tables.single(r, c));
    }
  }
  const WilcoxonResult w = wilcoxon_signed_rank(ms, single);
  {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "p = %.3g (W+ = %.1f, n_eff = %d)", w.p, w.w_plus,
                  w.n_effective);
    report.add("Wilcoxon signed-rank p < 0.001", w.p < 0.001, buf);
  }
  return report;
}

}  // namespace fbcsp
