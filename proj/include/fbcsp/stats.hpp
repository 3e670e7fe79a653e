#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fbcsp {

// 100 * matches / N, full precision. Rounding happens only at the reporting
// layer.
inline double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.empty()) throw std::invalid_argument("stats: empty prediction vector");
  if (predicted.size() != truth.size()) throw std::invalid_argument("stats: length mismatch");
  std::size_t matches = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == truth[i]) ++matches;
  }
  return 100.0 * static_cast<double>(matches) / static_cast<double>(predicted.size());
}

struct MedianRange {
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// Even-length median = mean of the two central order statistics.
inline MedianRange median_range(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("stats: median of empty vector");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  MedianRange out;
  out.min = values.front();
  out.max = values.back();
  out.median = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  return out;
}

// Half-away-from-zero rounding to one decimal, for report display only.
inline double display_round(double v) {
  return std::round(v * 10.0) / 10.0;
}

struct WilcoxonResult {
  double w_plus = 0.0;    // sum of ranks of positive differences
  double p = 1.0;         // two-sided
  int n_effective = 0;    // pairs remaining after dropping zero differences
};

namespace detail {

// Mid-ranks of |d|, scaled by 2 so they are exact integers (a run average of
// consecutive integer ranks is always a multiple of 1/2).
inline std::vector<std::int64_t> double_ranks_of_abs(const std::vector<double>& d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });

  std::vector<std::int64_t> ranks2(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    // ranks i+1 .. j+1 averaged; doubled: (i+1) + (j+1)
    const std::int64_t rank2 = static_cast<std::int64_t>(i + 1 + j + 1);
    for (std::size_t k = i; k <= j; ++k) ranks2[order[k]] = rank2;
    i = j + 1;
  }
  return ranks2;
}

inline double normal_sf(double z) {  // P(Z > z)
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace detail

// Two-sided Wilcoxon signed-rank test. Zero differences are dropped; tied
// |d| get mid-ranks. For n_effective <= 12 the p-value is exact by full 2^n
// sign enumeration; above that, normal approximation with tie correction and
// a continuity correction of 1/2 toward the mean. All pairs equal is a
// defined outcome (p = 1), not an error.
//
// The exact branch is authoritative at small n; on such samples the normal
// approximation typically lands within ~0.05 of the enumerated p, which is
// why 12 is a safe switch-over point.
inline WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  if (x.empty() || x.size() != y.size()) {
    throw std::invalid_argument("stats: wilcoxon needs equal-length nonempty vectors");
  }

  std::vector<double> d;
  d.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - y[i];
    if (diff != 0.0) d.push_back(diff);
  }

  WilcoxonResult res;
  res.n_effective = static_cast<int>(d.size());
  if (d.empty()) return res;  // w_plus = 0, p = 1

  const std::size_t n = d.size();
  const auto ranks2 = detail::double_ranks_of_abs(d);
  std::int64_t w_plus2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0.0) w_plus2 += ranks2[i];
  }
  const std::int64_t total2 = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n + 1);
  res.w_plus = static_cast<double>(w_plus2) / 2.0;

  if (n <= 12) {
    // Exact: both tails of the enumerated null, P(W >= hi) + P(W <= lo).
    const std::int64_t hi2 = std::max(w_plus2, total2 - w_plus2);
    const std::int64_t lo2 = total2 - hi2;
    std::uint64_t tail_count = 0;
    const std::uint64_t assignments = 1ULL << n;
    for (std::uint64_t mask = 0; mask < assignments; ++mask) {
      std::int64_t w2 = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1ULL << i)) w2 += ranks2[i];
      }
      if (w2 >= hi2 || w2 <= lo2) ++tail_count;
    }
    res.p = std::min(1.0, static_cast<double>(tail_count) / static_cast<double>(assignments));
  } else {
    const double dn = static_cast<double>(n);
    const double mean = dn * (dn + 1.0) / 4.0;
    double tie_term = 0.0;
    {
      std::vector<std::int64_t> sorted(ranks2);
      std::sort(sorted.begin(), sorted.end());
      std::size_t i = 0;
      while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        tie_term += t * t * t - t;
        i = j + 1;
      }
    }
    const double variance = dn * (dn + 1.0) * (2.0 * dn + 1.0) / 24.0 - tie_term / 48.0;
    if (!(variance > 0.0)) {
      res.p = 1.0;
      return res;
    }
    const double dev = res.w_plus - mean;
    const double z = (dev - 0.5 * (dev > 0 ? 1.0 : (dev < 0 ? -1.0 : 0.0))) / std::sqrt(variance);
    res.p = 2.0 * detail::normal_sf(std::abs(z));
    res.p = std::min(res.p, 1.0);
    res.p = std::max(res.p, std::numeric_limits<double>::min());
  }
  return res;
}

}  // namespace fbcsp
