#include "fbcsp/paper_tables.hpp"
#include "fbcsp/stats.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace fbcsp;

TEST_CASE("accuracy is exact-count percent at full precision", "[stats]") {
  std::vector<int> truth(17, 0);
  std::vector<int> pred(17, 1);
  for (int i = 0; i < 9; ++i) pred[i] = 0;
  const double acc = accuracy(pred, truth);
  CHECK(acc == Catch::Approx(100.0 * 9.0 / 17.0).margin(1e-12));
  CHECK(display_round(acc) == 52.9);

  CHECK(accuracy({0, 1, 0}, {0, 1, 0}) == 100.0);
  CHECK(accuracy({1, 0, 1}, {0, 1, 0}) == 0.0);
  CHECK_THROWS(accuracy({}, {}));
  CHECK_THROWS(accuracy({0}, {0, 1}));
}

TEST_CASE("median and range on the published first column", "[stats]") {
  const PaperTables tables = paper_tables();
  std::vector<double> col;
  for (int r = 0; r < 14; ++r) col.push_back(tables.msfbcsp(r, 0));
  const MedianRange mr = median_range(col);
  CHECK(mr.median == Catch::Approx(75.75).margin(1e-12));
  CHECK(mr.min == 52.9);
  CHECK(mr.max == 94.1);
}

TEST_CASE("median of a singleton is the value itself", "[stats]") {
  const MedianRange mr = median_range({42.5});
  CHECK(mr.median == 42.5);
  CHECK(mr.min == 42.5);
  CHECK(mr.max == 42.5);
  CHECK_THROWS(median_range({}));
}

TEST_CASE("pooled table medians match the published summary", "[stats]") {
  const PaperTables tables = paper_tables();
  std::vector<double> ms, single;
  for (int r = 0; r < 14; ++r) {
    for (int c = 0; c < 7; ++c) {
      ms.push_back(tables.msfbcsp(r, c));
      single.push_back(tables.single(r, c));
    }
  }
  CHECK(std::abs(median_range(ms).median - 81.3) <= 0.2);
  CHECK(median_range(ms).min == 41.2);
  CHECK(median_range(ms).max == 100.0);
  CHECK(std::abs(median_range(single).median - 61.1) <= 0.2);
  CHECK(median_range(single).min == 25.0);
  CHECK(median_range(single).max == 100.0);
}

TEST_CASE("wilcoxon on identical vectors is p = 1", "[stats]") {
  const WilcoxonResult r = wilcoxon_signed_rank({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
  CHECK(r.p == 1.0);
  CHECK(r.n_effective == 0);
  CHECK(r.w_plus == 0.0);
}

TEST_CASE("wilcoxon toy case has exact p = 0.25", "[stats]") {
  const WilcoxonResult r = wilcoxon_signed_rank({1.0, 2.0, 3.0}, {0.0, 0.0, 0.0});
  CHECK(r.w_plus == 6.0);
  CHECK(r.p == 0.25);
  CHECK(r.n_effective == 3);
}

TEST_CASE("swapping the samples mirrors W+ and keeps p", "[stats]") {
  Rng rng(31);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 + rng.next_below(10);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.next_below(8));
      y[i] = static_cast<double>(rng.next_below(8));
    }
    const WilcoxonResult a = wilcoxon_signed_rank(x, y);
    const WilcoxonResult b = wilcoxon_signed_rank(y, x);
    CAPTURE(rep);
    CHECK(a.p == b.p);
    const double total = a.n_effective * (a.n_effective + 1) / 2.0;
    CHECK(a.w_plus + b.w_plus == total);
  }
}

TEST_CASE("exact branch equals full enumeration on random vectors", "[stats]") {
  Rng rng(32);
  for (int rep = 0; rep < 120; ++rep) {
    const std::size_t n = 1 + rng.next_below(12);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(rng.next_below(10));
      y[i] = static_cast<double>(rng.next_below(10));
    }
    const WilcoxonResult got = wilcoxon_signed_rank(x, y);
    const oracles::EnumeratedWilcoxon want = oracles::enumerate_wilcoxon(x, y);
    CAPTURE(rep, n);
    CHECK(got.n_effective == want.n_effective);
    CHECK(got.w_plus == want.w_plus);
    CHECK(got.p == Catch::Approx(want.p).margin(1e-12));
  }
}

TEST_CASE("paired test over the published tables is highly significant", "[stats]") {
  const PaperTables tables = paper_tables();
  std::vector<double> ms, single;
  for (int r = 0; r < 14; ++r) {
    for (int c = 0; c < 7; ++c) {
      ms.push_back(tables.msfbcsp(r, c));
      single.push_back(tables.single(r, c));
    }
  }
  const WilcoxonResult r = wilcoxon_signed_rank(ms, single);
  CHECK(r.n_effective == 87);  // 98 pairs minus 11 zero differences
  CHECK(r.w_plus == 3777.5);
  CHECK(r.p < 0.001);
  CHECK(r.p < 1e-12);  // tie-corrected normal approximation, z ~ 7.9
  CHECK(r.p > 0.0);
}

TEST_CASE("display rounding is half away from zero at one decimal", "[stats]") {
  CHECK(display_round(75.75) == 75.8);
  CHECK(display_round(52.94117) == 52.9);
  CHECK(display_round(-0.25) == -0.3);
  CHECK(display_round(100.0) == 100.0);
}
