#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"
#include "textlab/error.hpp"
#include "textlab/labeling.hpp"
#include "textlab/rng.hpp"

using namespace textlab;

namespace {

Corpus corpus_with_categories(const std::vector<std::string>& cats) {
  std::vector<Document> docs;
  for (size_t i = 0; i < cats.size(); ++i) {
    Document d;
    d.id = std::to_string(i);
    d.source = Source::reddit;
    d.category = cats[i];
    d.body = "text " + std::to_string(i);
    d.text = d.body;
    docs.push_back(d);
  }
  return merge_corpora({docs});
}

}  // namespace

TEST_CASE("default mapping encodes the recorded analyst outcome") {
  SentimentMapping m = default_mapping();
  CHECK(m.cluster_to_sentiment.at(0) == Sentiment::negative);
  CHECK(m.cluster_to_sentiment.at(4) == Sentiment::negative);
  CHECK(m.cluster_to_sentiment.at(5) == Sentiment::negative);
  CHECK(m.cluster_to_sentiment.at(1) == Sentiment::neutral);
  CHECK(m.cluster_to_sentiment.at(6) == Sentiment::neutral);
  CHECK(m.cluster_to_sentiment.at(7) == Sentiment::neutral);
  CHECK(m.cluster_to_sentiment.at(2) == Sentiment::positive);
  CHECK(m.cluster_to_sentiment.at(3) == Sentiment::positive);
  REQUIRE(m.overrides.size() == 1);
  CHECK(m.overrides[0].first == "BotchedSurgeries");
  CHECK(m.overrides[0].second == Sentiment::negative);
}

TEST_CASE("apply_mapping") {
  SentimentMapping mapping = default_mapping();
  std::vector<std::string> cats = {"botox", "BotchedSurgeries", "nosejob",
                                   "botox"};
  std::vector<size_t> assignments = {0, 3, 2, 3};

  LabeledSet set = apply_mapping(assignments, mapping, cats);

  SUBCASE("cluster mapping applies") {
    CHECK(set.labels[0] == Sentiment::negative);  // cluster 0
    CHECK(set.labels[2] == Sentiment::positive);  // cluster 2
    CHECK(set.labels[3] == Sentiment::positive);  // cluster 3
    CHECK(set.provenance[0] == LabelProvenance::mapping);
  }

  SUBCASE("override rewrites a positive cluster to negative") {
    CHECK(set.labels[1] == Sentiment::negative);  // cluster 3 but Botched
    CHECK(set.provenance[1] == LabelProvenance::override_rule);
  }

  SUBCASE("one-hot rows match labels") {
    REQUIRE(set.one_hot.size() == 4);
    CHECK(set.one_hot[0] == std::array<uint8_t, 3>{1, 0, 0});
    CHECK(set.one_hot[2] == std::array<uint8_t, 3>{0, 0, 1});
    for (size_t i = 0; i < set.one_hot.size(); ++i) {
      int sum = set.one_hot[i][0] + set.one_hot[i][1] + set.one_hot[i][2];
      CHECK(sum == 1);
      CHECK(set.one_hot[i][static_cast<size_t>(set.labels[i])] == 1);
    }
  }

  SUBCASE("unmapped cluster id names the cluster") {
    std::vector<size_t> bad = {9};
    CHECK_THROWS_WITH_AS(
        apply_mapping(bad, mapping, {"botox"}), doctest::Contains("9"), Error);
  }

  SUBCASE("later override rules win") {
    SentimentMapping m2 = mapping;
    m2.overrides.emplace_back("BotchedSurgeries", Sentiment::neutral);
    LabeledSet s2 = apply_mapping(assignments, m2, cats);
    CHECK(s2.labels[1] == Sentiment::neutral);
  }

  SUBCASE("no document under the override category keeps a non-negative label") {
    for (size_t i = 0; i < cats.size(); ++i) {
      if (cats[i] == "BotchedSurgeries")
        CHECK(set.labels[i] == Sentiment::negative);
    }
  }

  SUBCASE("overrides never touch other categories") {
    SentimentMapping no_override = mapping;
    no_override.overrides.clear();
    LabeledSet before = apply_mapping(assignments, no_override, cats);
    for (size_t i = 0; i < cats.size(); ++i) {
      if (cats[i] != "BotchedSurgeries") CHECK(before.labels[i] == set.labels[i]);
    }
  }
}

TEST_CASE("mapping validation") {
  Corpus corpus = corpus_with_categories({"botox", "BotchedSurgeries"});
  SentimentMapping m = default_mapping();

  CHECK_NOTHROW(m.validate(8, corpus));

  SUBCASE("missing cluster id") {
    CHECK_THROWS_WITH_AS(m.validate(9, corpus), doctest::Contains("8"), Error);
  }
  SUBCASE("cluster id beyond k") {
    CHECK_THROWS_AS(m.validate(4, corpus), Error);
  }
  SUBCASE("override category must exist in the corpus") {
    Corpus other = corpus_with_categories({"botox"});
    CHECK_THROWS_WITH_AS(m.validate(8, other),
                         doctest::Contains("BotchedSurgeries"), Error);
  }
}

TEST_CASE("one_hot basics") {
  auto oh = one_hot({Sentiment::negative, Sentiment::positive,
                     Sentiment::neutral});
  CHECK(oh[0] == std::array<uint8_t, 3>{1, 0, 0});
  CHECK(oh[1] == std::array<uint8_t, 3>{0, 0, 1});
  CHECK(oh[2] == std::array<uint8_t, 3>{0, 1, 0});
}

TEST_CASE("class_balance") {
  SUBCASE("balanced labels give equal thirds") {
    std::vector<Sentiment> labels;
    for (int i = 0; i < 10; ++i) {
      labels.push_back(Sentiment::negative);
      labels.push_back(Sentiment::neutral);
      labels.push_back(Sentiment::positive);
    }
    ClassBalance b = class_balance(labels);
    CHECK(b.counts == std::array<size_t, 3>{10, 10, 10});
    for (double f : b.fractions) CHECK(f == doctest::Approx(1.0 / 3));
  }
  SUBCASE("all positive") {
    ClassBalance b = class_balance({Sentiment::positive, Sentiment::positive});
    CHECK(b.counts == std::array<size_t, 3>{0, 0, 2});
    CHECK(b.fractions[2] == 1.0);
  }
  SUBCASE("counts sum to n and fractions to 1 over random labelings") {
    Rng rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<Sentiment> labels;
      size_t n = 1 + rng.uniform_int(50);
      for (size_t i = 0; i < n; ++i)
        labels.push_back(static_cast<Sentiment>(rng.uniform_int(3)));
      ClassBalance b = class_balance(labels);
      CHECK(b.counts[0] + b.counts[1] + b.counts[2] == n);
      CHECK(b.fractions[0] + b.fractions[1] + b.fractions[2] ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("empty labels error") {
    CHECK_THROWS_AS(class_balance({}), Error);
  }
}

TEST_CASE("category_labels") {
  SUBCASE("eight categories map to 0..7 in first-appearance order") {
    std::vector<std::string> cats;
    for (int rep = 0; rep < 2; ++rep)
      for (int c = 0; c < 8; ++c) cats.push_back("cat" + std::to_string(c));
    Corpus corpus = corpus_with_categories(cats);
    auto labels = category_labels(corpus);
    REQUIRE(labels.size() == 16);
    for (size_t i = 0; i < labels.size(); ++i) CHECK(labels[i] == i % 8);
  }
  SUBCASE("single category gives all zeros") {
    Corpus corpus = corpus_with_categories({"only", "only", "only"});
    auto labels = category_labels(corpus);
    for (size_t l : labels) CHECK(l == 0);
  }
  SUBCASE("stable across shuffles (category list fixed at merge)") {
    Corpus corpus = corpus_with_categories(
        {"a", "b", "c", "a", "b", "c", "a", "b", "c", "a"});
    Corpus shuffled = shuffle(corpus, 77);
    CHECK(shuffled.categories == corpus.categories);
    auto labels = category_labels(shuffled);
    for (size_t i = 0; i < shuffled.documents.size(); ++i)
      CHECK(shuffled.categories[labels[i]] == shuffled.documents[i].category);
  }
}

TEST_CASE("mapping file parses and round-trips") {
  std::string text = R"(
[mapping]
0 = "negative"
1 = "neutral"
2 = "positive"

[[override]]
category = "BotchedSurgeries"
sentiment = "negative"
)";
  SentimentMapping m = parse_mapping(text);
  CHECK(m.cluster_to_sentiment.size() == 3);
  CHECK(m.cluster_to_sentiment.at(0) == Sentiment::negative);
  REQUIRE(m.overrides.size() == 1);

  SentimentMapping back = parse_mapping(mapping_to_text(m));
  CHECK(back.cluster_to_sentiment == m.cluster_to_sentiment);
  CHECK(back.overrides == m.overrides);

  SUBCASE("bad sentiment name") {
    CHECK_THROWS_AS(parse_mapping("[mapping]\n0 = \"meh\"\n"), Error);
  }
  SUBCASE("non-integer cluster key") {
    CHECK_THROWS_AS(parse_mapping("[mapping]\nzero = \"negative\"\n"), Error);
  }
}

TEST_CASE("labels file round-trips") {
  SentimentMapping mapping = default_mapping();
  std::vector<std::string> cats = {"botox", "BotchedSurgeries", "nosejob"};
  LabeledSet set = apply_mapping({0, 3, 2}, mapping, cats);
  std::vector<size_t> doc_indices = {10, 11, 15};
  std::string text = labels_to_text(set, doc_indices);
  auto pairs = labels_from_text(text);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0] == std::pair<size_t, Sentiment>{10, Sentiment::negative});
  CHECK(pairs[1] == std::pair<size_t, Sentiment>{11, Sentiment::negative});
  CHECK(pairs[2] == std::pair<size_t, Sentiment>{15, Sentiment::positive});
  CHECK(text.find("override") != std::string::npos);
}
