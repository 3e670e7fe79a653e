#include "fbcsp/evaluation.hpp"
#include "fbcsp/paper_check.hpp"

#include "oracles.hpp"
#include "testdata.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

using namespace fbcsp;

namespace {

Session labeled_session(int n_walk, int n_rest) {
  Session s;
  s.subject_id = "sub01";
  s.session_index = 1;
  s.fs_hz = 64.0;
  s.channel_names = {"a", "b"};
  Rng rng(5);
  for (int i = 0; i < n_walk + n_rest; ++i) {
    Trial t;
    t.label = i < n_walk ? kClassWalk : kClassRest;
    t.samples = oracles::random_matrix(rng, 32, 2);
    s.trials.push_back(std::move(t));
  }
  return s;
}

}  // namespace

TEST_CASE("split counts follow the floor-per-class rule", "[harness]") {
  SECTION("40 trials, 20/20") {
    const auto split = split_calibration(labeled_session(20, 20), 0.7, 123);
    CHECK(split.train.size() == 28);
    CHECK(split.test.size() == 12);
  }
  SECTION("35 trials, 18/17") {
    const auto split = split_calibration(labeled_session(18, 17), 0.7, 123);
    CHECK(split.train.size() == 23);  // floor(0.7*18) + floor(0.7*17) = 12 + 11
    CHECK(split.test.size() == 12);
  }
}

TEST_CASE("split is stratified, disjoint, exhaustive and deterministic", "[harness]") {
  const Session s = labeled_session(18, 17);
  const auto a = split_calibration(s, 0.7, 99);
  const auto b = split_calibration(s, 0.7, 99);
  CHECK(a.train_indices == b.train_indices);
  CHECK(a.test_indices == b.test_indices);

  const auto c = split_calibration(s, 0.7, 100);
  CHECK(a.train_indices != c.train_indices);  // different seed, different split

  std::set<int> all(a.train_indices.begin(), a.train_indices.end());
  for (int i : a.test_indices) {
    CHECK(all.count(i) == 0);
    all.insert(i);
  }
  CHECK(all.size() == s.trials.size());

  int train_walk = 0;
  for (const Trial& t : a.train) train_walk += t.label == kClassWalk ? 1 : 0;
  CHECK(train_walk == 12);  // floor(0.7 * 18)
}

TEST_CASE("split rejects degenerate input", "[harness]") {
  CHECK_THROWS(split_calibration(labeled_session(1, 20), 0.7, 1));
  CHECK_THROWS(split_calibration(labeled_session(10, 10), 0.0, 1));
  CHECK_THROWS(split_calibration(labeled_session(10, 10), 1.0, 1));
}

TEST_CASE("study report has the expected shape and session-1 identity", "[harness]") {
  SynthConfig cfg = testdata::strong_config(3, 12, 777);
  cfg.n_subjects = 2;
  std::vector<std::vector<Session>> subjects;
  for (int s = 0; s < cfg.n_subjects; ++s) subjects.push_back(synth_subject(cfg, s));

  StudyConfig study;
  study.spec = testdata::small_spec();
  study.m = 2;
  study.seed = 5;
  const EvalReport report = run_study(subjects, study);

  REQUIRE(report.msfbcsp.accuracy.rows() == 3);
  REQUIRE(report.msfbcsp.accuracy.cols() == 2);
  REQUIRE(report.single.accuracy.rows() == 3);
  CHECK(report.subject_ids == std::vector<std::string>{"sub01", "sub02"});

  // session 1 has no history: both methods coincide exactly
  CHECK(report.msfbcsp.accuracy.row(0) == report.single.accuracy.row(0));

  for (Eigen::Index r = 0; r < 3; ++r) {
    for (Eigen::Index c = 0; c < 2; ++c) {
      CHECK(report.msfbcsp.accuracy(r, c) >= 0.0);
      CHECK(report.msfbcsp.accuracy(r, c) <= 100.0);
    }
  }
  CHECK(report.wilcoxon.p > 0.0);
  CHECK(report.wilcoxon.p <= 1.0);
  CHECK(report.msfbcsp.per_subject.size() == 2);
}

TEST_CASE("no class signal yields chance-level accuracy", "[harness]") {
  SynthConfig cfg = testdata::strong_config(3, 20, 780);
  cfg.erd_depth = 0.0;
  std::vector<std::vector<Session>> subjects = {synth_subject(cfg, 0), synth_subject(cfg, 1)};

  StudyConfig study;
  study.spec = testdata::small_spec();
  study.m = 2;
  study.seed = 8;
  const EvalReport report = run_study(subjects, study);
  CHECK(report.single.pooled.median > 25.0);
  CHECK(report.single.pooled.median < 75.0);
  CHECK(report.msfbcsp.pooled.median > 25.0);
  CHECK(report.msfbcsp.pooled.median < 75.0);
}

TEST_CASE("disabling history equalizes the two methods", "[harness]") {
  SynthConfig cfg = testdata::strong_config(3, 10, 778);
  std::vector<std::vector<Session>> subjects = {synth_subject(cfg, 0)};

  StudyConfig study;
  study.spec = testdata::small_spec();
  study.m = 2;
  study.seed = 6;
  study.max_prior = 0;
  const EvalReport report = run_study(subjects, study);
  CHECK(report.msfbcsp.accuracy == report.single.accuracy);
  CHECK(report.wilcoxon.p == 1.0);
}

TEST_CASE("report files are written in the tables layout", "[harness]") {
  SynthConfig cfg = testdata::strong_config(2, 10, 779);
  std::vector<std::vector<Session>> subjects = {synth_subject(cfg, 0), synth_subject(cfg, 1)};

  StudyConfig study;
  study.spec = testdata::small_spec();
  study.m = 2;
  study.seed = 7;
  const EvalReport report = run_study(subjects, study);

  const auto tmp = std::filesystem::temp_directory_path() / "fbcsp_report_test";
  std::filesystem::create_directories(tmp);
  write_report_json(report, tmp / "report.json");
  write_method_csv(report.msfbcsp, report.subject_ids, tmp / "msfbcsp.csv");

  std::ifstream csv(tmp / "msfbcsp.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "Session,sub01,sub02");
  int rows = 0;
  std::string last;
  while (std::getline(csv, line)) {
    if (!line.empty()) last = line;
    ++rows;
  }
  CHECK(rows == 3);  // 2 session rows + summary row
  CHECK(last.rfind("Median (range),", 0) == 0);
  // one-decimal "median (min-max)" cells
  CHECK(last.find('(') != std::string::npos);
  CHECK(last.find('-') != std::string::npos);

  std::ifstream json_in(tmp / "report.json");
  nlohmann::json j;
  json_in >> j;
  CHECK(j.at("methods").contains("msfbcsp"));
  CHECK(j.at("methods").contains("single"));
  CHECK(j.at("wilcoxon").contains("p"));
  std::filesystem::remove_all(tmp);
}

TEST_CASE("paper_check passes on the pristine fixture", "[harness]") {
  const CheckReport report = paper_check();
  for (const CheckItem& item : report.items) {
    CAPTURE(item.name, item.detail);
    CHECK(item.passed);
  }
  CHECK(report.all_passed);
  CHECK(report.items.size() == 17);  // 14 column summaries + 2 pooled + wilcoxon
}

TEST_CASE("paper_check machinery detects a perturbed fixture", "[harness]") {
  // negative control: the same comparisons on deliberately wrong data fail
  PaperTables tables = paper_tables();
  std::vector<double> col;
  for (int r = 0; r < 14; ++r) col.push_back(tables.msfbcsp(r, 0) + 5.0);
  const MedianRange mr = median_range(col);
  const PrintedSummary want = paper_printed_summary_msfbcsp()[0];
  CHECK_FALSE(std::abs(mr.median - want.median) <= 0.1);
}
