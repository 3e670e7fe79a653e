#include "fbcsp/lda.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace fbcsp;

TEST_CASE("shrinkage leaves an isotropic sample covariance unchanged", "[lda]") {
  // two orthogonal rows of equal norm: S = X'X/n is exactly nu * I
  Mat x(2, 2);
  x << 3.0, 0.0, 0.0, -3.0;
  const ShrunkCovariance s = shrunk_covariance(x);
  const Mat expected = 4.5 * Mat::Identity(2, 2);
  CHECK((s.sigma - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("shrinkage intensity is always clamped to [0, 1]", "[lda]") {
  Rng rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(rng.next_below(40));
    const int d = 1 + static_cast<int>(rng.next_below(30));
    Mat x = oracles::random_matrix(rng, n, d);
    if (rep % 3 == 0) x *= 1e8;          // huge scale
    if (rep % 5 == 0) x.col(0).setZero();  // degenerate column
    x.rowwise() -= x.colwise().mean();
    const ShrunkCovariance s = shrunk_covariance(x);
    CAPTURE(rep, n, d);
    CHECK(s.gamma >= 0.0);
    CHECK(s.gamma <= 1.0);
  }
}

TEST_CASE("shrinkage matches the independently coded estimator", "[lda]") {
  Rng rng(22);
  Mat x = oracles::random_matrix(rng, 30, 126);
  x.rowwise() -= x.colwise().mean();
  const ShrunkCovariance fast = shrunk_covariance(x);
  const oracles::NaiveShrinkage naive = oracles::naive_shrunk_covariance(x);
  CHECK(std::abs(fast.gamma - naive.gamma) < 1e-10);
  CHECK((fast.sigma - naive.sigma).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("shrinkage rejects fewer than two samples", "[lda]") {
  CHECK_THROWS(shrunk_covariance(Mat::Zero(1, 5)));
}

TEST_CASE("class means are plain arithmetic means", "[lda]") {
  Mat x(4, 1);
  x << -1.1, -0.9, 0.9, 1.1;
  const LdaModel model = train_lda(x, {kClassWalk, kClassWalk, kClassRest, kClassRest});
  CHECK(model.mean0(0) == Catch::Approx(-1.0).margin(1e-15));
  CHECK(model.mean1(0) == Catch::Approx(1.0).margin(1e-15));
  CHECK(model.feature_dim == 1);
}

TEST_CASE("single-class training is rejected", "[lda]") {
  Mat x(4, 2);
  x.setRandom();
  CHECK_THROWS(train_lda(x, {kClassWalk, kClassWalk, kClassWalk, kClassWalk}));
  CHECK_THROWS(train_lda(x, {kClassWalk, kClassWalk, kClassRest}));  // length mismatch
}

TEST_CASE("well-separated gaussians are classified perfectly on train data", "[lda]") {
  Rng rng(23);
  const int n = 40, d = 8;
  Mat x(n, d);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = i < n / 2 ? kClassWalk : kClassRest;
    for (int j = 0; j < d; ++j) {
      x(i, j) = rng.next_gaussian() + (labels[i] == kClassWalk ? 0.0 : (j == 0 ? 10.0 : 0.0));
    }
  }
  const LdaModel model = train_lda(x, labels);
  const Mat probs = predict_proba(model, x);
  for (int i = 0; i < n; ++i) {
    const int picked = probs(i, 0) > 0.5 ? kClassWalk : kClassRest;
    CHECK(picked == labels[i]);
  }
}

TEST_CASE("midpoint of a symmetric model scores (0.5, 0.5)", "[lda]") {
  Mat x(4, 1);
  x << -2.0, -1.0, 1.0, 2.0;
  const LdaModel model = train_lda(x, {kClassWalk, kClassWalk, kClassRest, kClassRest});
  Mat probe(1, 1);
  probe << 0.0;  // exactly midway between the class means
  const Mat probs = predict_proba(model, probe);
  CHECK(probs(0, 0) == Catch::Approx(0.5).margin(1e-12));
  CHECK(probs(0, 1) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("a class mean far from the boundary is confidently classified", "[lda]") {
  Rng rng(24);
  const int n = 200;
  Mat x(n, 1);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = i % 2;
    x(i, 0) = rng.next_gaussian() + (labels[i] == kClassWalk ? 0.0 : 10.0);
  }
  const LdaModel model = train_lda(x, labels);
  Mat probe(1, 1);
  probe << model.mean0(0);
  CHECK(predict_proba(model, probe)(0, 0) > 0.99);
}

TEST_CASE("probability rows sum to one", "[lda]") {
  Rng rng(25);
  Mat x = oracles::random_matrix(rng, 60, 5);
  std::vector<int> labels(60);
  for (int i = 0; i < 60; ++i) {
    labels[i] = static_cast<int>(rng.next_below(2));
    x(i, 0) += labels[i] * 2.0;
  }
  const LdaModel model = train_lda(x, labels);
  const Mat probs = predict_proba(model, oracles::random_matrix(rng, 100, 5) * 50.0);
  CHECK(is_probability_matrix(probs, 1e-12));
}

TEST_CASE("posterior is strictly monotone along the discriminant direction", "[lda]") {
  Rng rng(26);
  Mat x = oracles::random_matrix(rng, 40, 3);
  std::vector<int> labels(40);
  for (int i = 0; i < 40; ++i) {
    labels[i] = i % 2;
    x(i, 1) -= labels[i] * 1.5;
  }
  const LdaModel model = train_lda(x, labels);
  Mat probes(9, 3);
  double last = -1.0;
  for (int i = 0; i < 9; ++i) {
    probes.row(i) = (static_cast<double>(i - 4) * model.weights).transpose();
  }
  const Mat probs = predict_proba(model, probes);
  for (int i = 0; i < 9; ++i) {
    CHECK(probs(i, 0) > last);
    last = probs(i, 0);
  }
}

TEST_CASE("translating all features leaves the posterior unchanged", "[lda]") {
  Rng rng(27);
  Mat x = oracles::random_matrix(rng, 50, 4);
  std::vector<int> labels(50);
  for (int i = 0; i < 50; ++i) {
    labels[i] = static_cast<int>(rng.next_below(2));
    x(i, 2) += labels[i] * 3.0;
  }
  const Mat tests = oracles::random_matrix(rng, 20, 4);
  Vec shift(4);
  shift << 100.0, -40.0, 7.5, 0.25;

  const Mat p1 = predict_proba(train_lda(x, labels), tests);
  const Mat x_shifted = x.rowwise() + shift.transpose();
  const Mat tests_shifted = tests.rowwise() + shift.transpose();
  const Mat p2 = predict_proba(train_lda(x_shifted, labels), tests_shifted);
  CHECK((p1 - p2).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("full shrinkage collapses the discriminant to the mean difference", "[lda]") {
  Rng rng(28);
  Mat x = oracles::random_matrix(rng, 30, 6);
  std::vector<int> labels(30);
  for (int i = 0; i < 30; ++i) {
    labels[i] = i % 2;
    x(i, 0) += labels[i] * 2.0;
    x(i, 3) -= labels[i] * 0.5;
  }
  const LdaModel model = train_lda(x, labels, 1.0);  // gamma forced to 1
  CHECK(model.shrinkage_gamma == 1.0);
  const Vec expected_dir = (model.mean0 - model.mean1).normalized();
  const double cosine = model.weights.normalized().dot(expected_dir);
  CHECK(cosine > 1.0 - 1e-8);
}
