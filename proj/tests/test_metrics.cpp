#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "textlab/error.hpp"
#include "textlab/metrics.hpp"
#include "textlab/rng.hpp"

using namespace textlab;

TEST_CASE("confusion_matrix counting") {
  SUBCASE("perfect predictions give a diagonal of supports") {
    std::vector<size_t> y = {0, 0, 1, 2, 2, 2};
    ConfusionMatrix m = confusion_matrix(y, y, 3);
    CHECK(m.at(0, 0) == 2);
    CHECK(m.at(1, 1) == 1);
    CHECK(m.at(2, 2) == 3);
    CHECK(m.total() == 6);
  }

  SUBCASE("spec fixture") {
    ConfusionMatrix m =
        confusion_matrix({0, 0, 1, 2}, {0, 1, 1, 2}, 3);
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(0, 1) == 1);
    CHECK(m.at(0, 2) == 0);
    CHECK(m.at(1, 1) == 1);
    CHECK(m.at(2, 2) == 1);
  }

  SUBCASE("entries always sum to n") {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
      size_t n = 1 + rng.uniform_int(60);
      size_t c = 2 + rng.uniform_int(5);
      std::vector<size_t> yt(n), yp(n);
      for (size_t i = 0; i < n; ++i) {
        yt[i] = rng.uniform_int(c);
        yp[i] = rng.uniform_int(c);
      }
      CHECK(confusion_matrix(yt, yp, c).total() == n);
    }
  }

  SUBCASE("out-of-range labels name the index") {
    CHECK_THROWS_WITH_AS(confusion_matrix({0, 3}, {0, 0}, 3),
                         doctest::Contains("index 1"), Error);
    CHECK_THROWS_AS(confusion_matrix({0}, {5}, 3), Error);
    CHECK_THROWS_AS(confusion_matrix({0, 1}, {0}, 2), Error);
  }
}

TEST_CASE("classification_report on the hand-computed fixture") {
  ConfusionMatrix m = confusion_matrix({0, 0, 1, 2}, {0, 1, 1, 2}, 3);
  EvalReport r = classification_report(m);

  CHECK(r.n == 4);
  CHECK(r.accuracy == doctest::Approx(0.75));
  REQUIRE(r.per_class.size() == 3);

  CHECK(r.per_class[0].precision == doctest::Approx(1.0));
  CHECK(r.per_class[0].recall == doctest::Approx(0.5));
  CHECK(r.per_class[0].f1 == doctest::Approx(2.0 / 3.0));
  CHECK(r.per_class[0].support == 2);

  CHECK(r.per_class[1].precision == doctest::Approx(0.5));
  CHECK(r.per_class[1].recall == doctest::Approx(1.0));
  CHECK(r.per_class[1].f1 == doctest::Approx(2.0 / 3.0));

  CHECK(r.per_class[2].precision == doctest::Approx(1.0));
  CHECK(r.per_class[2].recall == doctest::Approx(1.0));
  CHECK(r.per_class[2].f1 == doctest::Approx(1.0));

  CHECK(r.macro_f1 == doctest::Approx(7.0 / 9.0));
  // weighted: (2/3*2 + 2/3*1 + 1*1) / 4
  CHECK(r.weighted_f1 == doctest::Approx((2.0 / 3 * 3 + 1.0) / 4));
}

TEST_CASE("all-one-class predictions") {
  // everything predicted class 0
  ConfusionMatrix m = confusion_matrix({0, 1, 1, 2}, {0, 0, 0, 0}, 3);
  EvalReport r = classification_report(m);
  CHECK(r.per_class[0].precision == doctest::Approx(0.25));  // its prevalence
  CHECK(r.per_class[1].precision == 0.0);
  CHECK(r.per_class[1].zero_predicted);
  CHECK(r.per_class[2].precision == 0.0);
  CHECK(r.per_class[2].zero_predicted);
  CHECK(r.per_class[1].f1 == 0.0);
}

TEST_CASE("report identities hold for fuzzed label vectors") {
  Rng rng(999);
  for (int trial = 0; trial < 1000; ++trial) {
    size_t n = 1 + rng.uniform_int(80);
    size_t c = 2 + rng.uniform_int(6);
    std::vector<size_t> yt(n), yp(n);
    for (size_t i = 0; i < n; ++i) {
      yt[i] = rng.uniform_int(c);
      yp[i] = rng.uniform_int(c);
    }
    ConfusionMatrix m = confusion_matrix(yt, yp, c);
    EvalReport r = classification_report(m);

    size_t trace = 0;
    for (size_t k = 0; k < c; ++k) trace += m.at(k, k);
    CHECK(r.accuracy == double(trace) / double(n));  // exact
    for (size_t k = 0; k < c; ++k) {
      CHECK(r.per_class[k].support == m.row_sum(k));
      CHECK(r.per_class[k].precision >= 0.0);
      CHECK(r.per_class[k].precision <= 1.0);
      CHECK(r.per_class[k].recall >= 0.0);
      CHECK(r.per_class[k].recall <= 1.0);
      CHECK(r.per_class[k].f1 >= 0.0);
      CHECK(r.per_class[k].f1 <= 1.0);
    }
  }
}

TEST_CASE("report text includes labels and the matrix") {
  ConfusionMatrix m = confusion_matrix({0, 1}, {0, 1}, 2);
  EvalReport r = classification_report(m, {"negative", "positive"});
  std::string text = r.to_text();
  CHECK(text.find("negative") != std::string::npos);
  CHECK(text.find("confusion matrix") != std::string::npos);
  CHECK(text.find("accuracy 1.0000") != std::string::npos);
}
