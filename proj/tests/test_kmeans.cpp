#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "test_util.hpp"
#include "textlab/corpus.hpp"
#include "textlab/error.hpp"
#include "textlab/kmeans.hpp"
#include "textlab/preprocess.hpp"
#include "textlab/rng.hpp"

using namespace textlab;

namespace {

SparseMatrix points_1d(const std::vector<double>& xs) {
  std::vector<std::vector<double>> rows;
  for (double x : xs) rows.push_back({x});
  return sparse_from_dense(rows);
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Exhaustive enumeration of all k^N assignments; centroids are cluster means.
double brute_force_inertia(const std::vector<std::vector<double>>& pts,
                           size_t k) {
  const size_t n = pts.size();
  const size_t dim = pts[0].size();
  double best = 1e300;
  std::vector<size_t> assign(n, 0);
  size_t total = 1;
  for (size_t i = 0; i < n; ++i) total *= k;
  for (size_t code = 0; code < total; ++code) {
    size_t c = code;
    for (size_t i = 0; i < n; ++i) {
      assign[i] = c % k;
      c /= k;
    }
    std::vector<std::vector<double>> centroid(k, std::vector<double>(dim, 0));
    std::vector<size_t> count(k, 0);
    for (size_t i = 0; i < n; ++i) {
      ++count[assign[i]];
      for (size_t d = 0; d < dim; ++d) centroid[assign[i]][d] += pts[i][d];
    }
    for (size_t c2 = 0; c2 < k; ++c2)
      if (count[c2])
        for (size_t d = 0; d < dim; ++d) centroid[c2][d] /= double(count[c2]);
    double inertia = 0;
    for (size_t i = 0; i < n; ++i) inertia += sq_dist(pts[i], centroid[assign[i]]);
    best = std::min(best, inertia);
  }
  return best;
}

}  // namespace

TEST_CASE("kmeanspp_init basics") {
  SUBCASE("k=1 picks one of the points") {
    auto pts = points_1d({1.0, 2.0, 3.0});
    auto c = kmeanspp_init(pts, 1, 5);
    REQUIRE(c.size() == 1);
    CHECK((c[0][0] == 1.0 || c[0][0] == 2.0 || c[0][0] == 3.0));
  }

  SUBCASE("two far points with k=2 selects both") {
    auto pts = points_1d({0.0, 100.0});
    for (uint64_t seed = 0; seed < 20; ++seed) {
      auto c = kmeanspp_init(pts, 2, seed);
      std::set<double> chosen = {c[0][0], c[1][0]};
      CHECK(chosen == std::set<double>{0.0, 100.0});
    }
  }

  SUBCASE("deterministic per seed") {
    auto pts = points_1d({0, 1, 2, 3, 10, 11, 12});
    CHECK(kmeanspp_init(pts, 3, 9) == kmeanspp_init(pts, 3, 9));
  }

  SUBCASE("fewer distinct points than k errors") {
    auto pts = points_1d({5.0, 5.0, 5.0});
    CHECK_THROWS_AS(kmeanspp_init(pts, 2, 1), Error);
  }
}

TEST_CASE("lloyd_step hand-computed 4-point case") {
  auto pts = points_1d({0, 1, 10, 11});
  std::vector<std::vector<double>> centroids = {{0.0}, {11.0}};
  LloydStep step = lloyd_step(pts, centroids);
  CHECK(step.assignments == std::vector<size_t>{0, 0, 1, 1});
  CHECK(step.new_centroids[0][0] == doctest::Approx(0.5));
  CHECK(step.new_centroids[1][0] == doctest::Approx(10.5));
  CHECK(step.inertia == doctest::Approx(2.0));  // 0 + 1 + 1 + 0
}

TEST_CASE("lloyd_step with points already at centroids") {
  auto pts = points_1d({2.0, 8.0});
  std::vector<std::vector<double>> centroids = {{2.0}, {8.0}};
  LloydStep step = lloyd_step(pts, centroids);
  CHECK(step.assignments == std::vector<size_t>{0, 1});
  CHECK(step.inertia == 0.0);
}

TEST_CASE("lloyd_step re-seeds empty clusters with the farthest point") {
  auto pts = points_1d({0.0, 1.0, 50.0});
  std::vector<std::vector<double>> centroids = {{0.0}, {1.0}, {-100.0}};
  LloydStep step = lloyd_step(pts, centroids);
  REQUIRE(step.new_centroids.size() == 3);
  // 50 is farthest from its assigned centroid, becomes the empty cluster
  CHECK(step.new_centroids[2][0] == 50.0);
}

TEST_CASE("kmeans_fit on two blobs finds the optimum") {
  auto pts = points_1d({0, 1, 10, 11});
  KmeansConfig cfg;
  cfg.k = 2;
  cfg.seed = 42;
  ClusterModel model = kmeans_fit(pts, cfg);
  CHECK(model.inertia == doctest::Approx(1.0).epsilon(1e-12));
  std::set<double> cents = {model.centroids[0][0], model.centroids[1][0]};
  CHECK(cents == std::set<double>{0.5, 10.5});
  CHECK(model.assignments[0] == model.assignments[1]);
  CHECK(model.assignments[2] == model.assignments[3]);
  CHECK(model.assignments[0] != model.assignments[2]);
}

TEST_CASE("kmeans_fit degenerate cases") {
  SUBCASE("k equal to distinct point count gives zero inertia") {
    auto pts = points_1d({1, 2, 3});
    KmeansConfig cfg;
    cfg.k = 3;
    cfg.seed = 7;
    CHECK(kmeans_fit(pts, cfg).inertia == doctest::Approx(0.0));
  }
  SUBCASE("k=1 centroid is the mean") {
    auto pts = points_1d({1, 2, 3, 6});
    KmeansConfig cfg;
    cfg.k = 1;
    cfg.seed = 7;
    ClusterModel m = kmeans_fit(pts, cfg);
    CHECK(m.centroids[0][0] == doctest::Approx(3.0));
  }
}

TEST_CASE("fit is deterministic including the seed") {
  Rng rng(4);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 30; ++i)
    rows.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
  auto pts = sparse_from_dense(rows);
  KmeansConfig cfg;
  cfg.k = 4;
  cfg.seed = 17;
  ClusterModel a = kmeans_fit(pts, cfg);
  ClusterModel b = kmeans_fit(pts, cfg);
  CHECK(a.centroids == b.centroids);
  CHECK(a.assignments == b.assignments);
  CHECK(a.inertia == b.inertia);
}

TEST_CASE("small-instance optimality vs exhaustive partitions") {
  Rng rng(271828);
  for (int trial = 0; trial < 50; ++trial) {
    size_t n = 3 + rng.uniform_int(8);   // <= 10
    size_t k = 1 + rng.uniform_int(3);   // <= 3
    if (k > n) k = n;
    size_t dim = 1 + rng.uniform_int(3);
    std::vector<std::vector<double>> rows(n, std::vector<double>(dim));
    for (auto& r : rows)
      for (auto& x : r) x = rng.uniform() * 10.0;

    auto pts = sparse_from_dense(rows);
    KmeansConfig cfg;
    cfg.k = k;
    cfg.n_init = 50;  // tiny instances need extra restarts to pin the optimum
    cfg.seed = 1000 + trial;
    ClusterModel model = kmeans_fit(pts, cfg);
    double best = brute_force_inertia(rows, k);
    CAPTURE(trial);
    CAPTURE(n);
    CAPTURE(k);
    CHECK(std::abs(model.inertia - best) < 1e-9);
  }
}

TEST_CASE("per-iteration inertia is non-increasing") {
  Rng rng(55);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 40; ++i) rows.push_back({rng.uniform(), rng.uniform()});
  auto pts = sparse_from_dense(rows);
  for (uint64_t seed = 0; seed < 5; ++seed) {
    auto centroids = kmeanspp_init(pts, 4, seed);
    double prev = 1e300;
    for (int iter = 0; iter < 25; ++iter) {
      LloydStep step = lloyd_step(pts, centroids);
      CHECK(step.inertia <= prev + 1e-9);
      prev = step.inertia;
      centroids = step.new_centroids;
    }
  }
}

TEST_CASE("every row is assigned to its nearest centroid") {
  Rng rng(66);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 50; ++i) rows.push_back({rng.uniform(), rng.uniform()});
  auto pts = sparse_from_dense(rows);
  KmeansConfig cfg;
  cfg.k = 5;
  cfg.seed = 3;
  ClusterModel m = kmeans_fit(pts, cfg);
  double recomputed = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    double assigned = sq_dist(rows[i], m.centroids[m.assignments[i]]);
    recomputed += assigned;
    for (size_t c = 0; c < m.k(); ++c)
      CHECK(assigned <= sq_dist(rows[i], m.centroids[c]) + 1e-12);
  }
  CHECK(m.inertia == doctest::Approx(recomputed).epsilon(1e-6));
}

TEST_CASE("top_terms ranks centroid components") {
  Vocabulary vocab;
  for (const char* t : {"amaze", "botox", "filler", "surgeri"}) {
    vocab.index.emplace(t, vocab.terms.size());
    vocab.terms.push_back(t);
    vocab.doc_freq.push_back(1);
  }
  ClusterModel model;
  model.centroids = {{0.0, 1.0, 0.0, 0.0}, {0.5, 0.5, 0.0, 0.2}};
  model.assignments = {0, 1};

  SUBCASE("one-hot centroid puts that term first") {
    auto tt = top_terms(model, vocab, 1);
    CHECK(tt[0] == std::vector<std::string>{"botox"});
  }
  SUBCASE("m = 0 gives empty lists") {
    auto tt = top_terms(model, vocab, 0);
    CHECK(tt[0].empty());
    CHECK(tt[1].empty());
  }
  SUBCASE("ties break lexicographically") {
    auto tt = top_terms(model, vocab, 4);
    CHECK(tt[1] ==
          std::vector<std::string>{"amaze", "botox", "surgeri", "filler"});
  }
  SUBCASE("m larger than vocabulary clamps") {
    auto tt = top_terms(model, vocab, 10);
    CHECK(tt[0].size() == 4);
  }
}

TEST_CASE("planted-vocabulary corpus: cluster top terms stay in one vocabulary") {
  SyntheticSpec spec;
  spec.n_docs_per_category = 150;
  spec.categories = {{"mixed", Source::reddit}};
  for (int i = 0; i < 15; ++i) {
    spec.negative_vocab.push_back("neg" + std::to_string(i));
    spec.neutral_vocab.push_back("neu" + std::to_string(i));
    spec.positive_vocab.push_back("pos" + std::to_string(i));
  }
  spec.doc_length_min = 10;
  spec.doc_length_max = 25;
  spec.seed = 2024;
  auto sc = generate_synthetic(spec);

  std::vector<TokenizedDoc> docs;
  for (size_t i = 0; i < sc.corpus.documents.size(); ++i)
    docs.push_back({i, tokenize(sc.corpus.documents[i].text)});
  Vocabulary vocab = build_vocabulary(docs);
  SparseMatrix matrix = vectorize(docs, vocab);

  KmeansConfig cfg;
  cfg.k = 3;
  cfg.seed = 11;
  ClusterModel model = kmeans_fit(matrix, cfg);
  auto tt = top_terms(model, vocab, 10);
  for (size_t c = 0; c < 3; ++c) {
    size_t neg = 0, neu = 0, pos = 0;
    for (const auto& term : tt[c]) {
      if (term.rfind("neg", 0) == 0) ++neg;
      if (term.rfind("neu", 0) == 0) ++neu;
      if (term.rfind("pos", 0) == 0) ++pos;
    }
    size_t top = std::max({neg, neu, pos});
    CAPTURE(c);
    CHECK(top >= 9);  // >= 90% of the top-10 from one planted vocabulary
  }
}

TEST_CASE("cluster model file round-trips") {
  auto pts = points_1d({0, 1, 10, 11});
  KmeansConfig cfg;
  cfg.k = 2;
  cfg.seed = 1;
  ClusterModel m = kmeans_fit(pts, cfg);
  ClusterModel back = cluster_model_from_text(cluster_model_to_text(m));
  CHECK(back.centroids == m.centroids);
  CHECK(back.assignments == m.assignments);
  CHECK_THROWS_AS(cluster_model_from_text("KMEANS v1 2 1\n0.5\n"), Error);
}
