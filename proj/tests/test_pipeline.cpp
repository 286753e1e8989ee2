#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <set>

#include "test_util.hpp"
#include "textlab/corpus.hpp"
#include "textlab/error.hpp"
#include "textlab/parallel.hpp"
#include "textlab/pipeline.hpp"
#include "textlab/text_io.hpp"

using namespace textlab;

namespace {

std::string synth_config_text(uint64_t seed) {
  std::string neg = "[", neu = "[", pos = "[", noise = "[";
  for (int i = 0; i < 12; ++i) {
    std::string suffix = std::to_string(i) + "\"" + (i + 1 < 12 ? ", " : "]");
    neg += "\"neg" + suffix;
    neu += "\"neu" + suffix;
    pos += "\"pos" + suffix;
  }
  for (int i = 0; i < 6; ++i)
    noise += "\"nz" + std::to_string(i) + "\"" + (i + 1 < 6 ? ", " : "]");

  return std::string("[pipeline]\nseed = ") + std::to_string(seed) +
         "\n\n[synth]\n"
         "docs_per_category = 50\n"
         "categories = [\"reddit:CatA\", \"reddit:CatB\", \"twitter:catc\", "
         "\"twitter:catd\"]\n"
         "negative_vocab = " + neg + "\n"
         "neutral_vocab = " + neu + "\n"
         "positive_vocab = " + pos + "\n"
         "noise_vocab = " + noise + "\n"
         "noise_fraction = 0.15\n"
         "doc_length_min = 8\n"
         "doc_length_max = 20\n"
         "\n[kmeans]\n"
         "k_values = [4, 3]\n"
         "n_init = 4\n"
         "\n[tsne]\n"
         "n_iter = 120\n"
         "exaggeration_iters = 40\n"
         "momentum_switch_iter = 40\n"
         "perplexity = 12.0\n"
         "\n[lda]\n"
         "k_values = [3, 2]\n"
         "sweeps = 60\n"
         "burn_in = 40\n"
         "\n[label]\n"
         "cluster_k = 4\n"
         "\n[train]\n"
         "epochs = 4\n"
         "hidden_units = 16\n"
         "\n[grid]\n"
         "architectures = [\"dnn\"]\n"
         "dropouts = [0, 0.3]\n";
}

PipelineConfig config_from_text(const std::string& text) {
  return parse_pipeline_config(parse_config(text));
}

}  // namespace

TEST_CASE("parse_pipeline_config applies defaults and validates sources") {
  SUBCASE("synth config parses with defaults") {
    PipelineConfig cfg = config_from_text(synth_config_text(5));
    CHECK(cfg.use_synth);
    CHECK(cfg.seed == 5);
    CHECK(cfg.synth.categories.size() == 4);
    CHECK(cfg.synth.categories[2].source == Source::twitter);
    CHECK(cfg.kmeans_ks == std::vector<size_t>{4, 3});
    CHECK(cfg.kmeans_n_init == 4);
    CHECK(cfg.tsne.perplexity == 12.0);
    CHECK(cfg.lda_sweeps == 60);
    CHECK(cfg.train.epochs == 4);
    CHECK(cfg.train.val_fraction == 0.2);
    CHECK(cfg.test_fraction == 0.2);
    CHECK(cfg.grid_dropouts == std::vector<double>{0.0, 0.3});
    CHECK(cfg.table2_dropout == 0.3);
  }

  SUBCASE("a config without a data source names both sections") {
    CHECK_THROWS_WITH_AS(config_from_text("[pipeline]\nseed = 1\n"),
                         doctest::Contains("[ingest]"), Error);
  }

  SUBCASE("[ingest] with no files is a config error naming the section") {
    CHECK_THROWS_WITH_AS(config_from_text("[ingest]\nx = 1\n"),
                         doctest::Contains("[ingest]"), Error);
    CHECK_THROWS_WITH_AS(config_from_text("[ingest]\nreddit_files = []\n"),
                         doctest::Contains("reddit_files"), Error);
  }

  SUBCASE("ingest field maps default to snscrape-style columns") {
    PipelineConfig cfg = config_from_text(
        "[ingest]\nreddit_files = [\"r.jsonl\"]\ntwitter_files = [\"t.jsonl\"]\n");
    REQUIRE(cfg.ingest.size() == 2);
    CHECK(cfg.ingest[0].field_map.title_path == "title");
    CHECK(cfg.ingest[0].field_map.body_path == "selftext");
    CHECK(cfg.ingest[1].field_map.title_path == "");
    CHECK(cfg.ingest[1].field_map.body_path == "content");
  }

  SUBCASE("inline mapping comes through") {
    PipelineConfig cfg = config_from_text(
        synth_config_text(1) +
        "\n[mapping]\n0 = \"negative\"\n1 = \"neutral\"\n2 = \"positive\"\n"
        "3 = \"positive\"\n\n[[override]]\ncategory = \"CatA\"\n"
        "sentiment = \"negative\"\n");
    REQUIRE(cfg.inline_mapping.has_value());
    CHECK(cfg.inline_mapping->cluster_to_sentiment.size() == 4);
    CHECK(cfg.inline_mapping->overrides.size() == 1);
  }
}

TEST_CASE("mapping_from_planted takes the per-cluster majority") {
  std::vector<size_t> assignments = {0, 0, 0, 1, 1, 2};
  std::vector<Sentiment> planted = {
      Sentiment::negative, Sentiment::negative, Sentiment::positive,
      Sentiment::neutral,  Sentiment::neutral,  Sentiment::positive};
  SentimentMapping m = mapping_from_planted(assignments, planted, 3);
  CHECK(m.cluster_to_sentiment.at(0) == Sentiment::negative);
  CHECK(m.cluster_to_sentiment.at(1) == Sentiment::neutral);
  CHECK(m.cluster_to_sentiment.at(2) == Sentiment::positive);
  CHECK(m.overrides.empty());
}

TEST_CASE("run_pipeline end to end on a small synthetic corpus") {
  auto dir = testutil::scratch_dir("pipeline");
  PipelineConfig cfg = config_from_text(synth_config_text(77));
  cfg.out_dir = dir + "/run1";

  PipelineResult result = run_pipeline(cfg);

  SUBCASE("manifest lists the expected artifact classes") {
    CHECK(result.manifest.size() >= 12);
    std::set<std::string> names;
    for (const auto& [hash, path] : result.manifest) {
      CHECK(hash.size() == 64);
      names.insert(path);
      CHECK(std::filesystem::exists(cfg.out_dir + "/" + path));
    }
    for (const char* expected :
         {"corpus.jsonl", "planted_labels.tsv", "tokenized.tsv", "vocab.tsv",
          "tfidf.txt", "kmeans_k4.txt", "kmeans_k3.txt", "tsne.txt",
          "lda_k3.txt", "lda_k2.txt", "labels.tsv", "mapping_used.toml",
          "net_dnn_d0.3_sentiment.txt", "history_dnn_d0.3_sentiment.csv",
          "eval_dnn_d0.3_sentiment.txt", "eval_planted_dnn_d0.3_sentiment.txt",
          "net_dnn_d0.3_classification.txt", "table2.txt", "table3.txt",
          "grid.csv", "fig_tsne_categories.svg", "fig_kmeans_tsne.svg",
          "fig_lda_topics_k3.svg", "fig_curves_dnn.svg",
          "fig_curves_tasks.svg", "stats.txt"}) {
      CAPTURE(expected);
      CHECK(names.count(expected) == 1);
    }
    // manifest.txt itself reflects the entries
    std::string manifest = read_file(cfg.out_dir + "/manifest.txt");
    CHECK(manifest.rfind("manifest v1 sha256\n", 0) == 0);
    CHECK(manifest.find("tfidf.txt") != std::string::npos);
  }

  SUBCASE("grid and planted accuracies are populated") {
    CHECK(result.grid.rows.size() == 3);  // 2 sentiment + 1 classification
    REQUIRE(result.planted_test_accuracy.size() == 2);
    for (const auto& [name, acc] : result.planted_test_accuracy) {
      CHECK(acc >= 0.0);
      CHECK(acc <= 1.0);
    }
    CHECK(result.corpus_size == 200);
    CHECK(result.vocab_size > 20);
  }

  SUBCASE("rerun with the same config and seed is hash-identical") {
    PipelineConfig cfg2 = cfg;
    cfg2.out_dir = dir + "/run2";
    PipelineResult again = run_pipeline(cfg2);
    REQUIRE(again.manifest.size() == result.manifest.size());
    for (size_t i = 0; i < result.manifest.size(); ++i) {
      CHECK(again.manifest[i].second == result.manifest[i].second);
      CAPTURE(result.manifest[i].second);
      CHECK(again.manifest[i].first == result.manifest[i].first);
    }
    CHECK(read_file(cfg.out_dir + "/manifest.txt") ==
          read_file(cfg2.out_dir + "/manifest.txt"));
  }

  SUBCASE("worker thread count does not change any output byte") {
    PipelineConfig cfg_t1 = cfg;
    cfg_t1.out_dir = dir + "/threads1";
    cfg_t1.threads = 1;
    PipelineConfig cfg_t4 = cfg;
    cfg_t4.out_dir = dir + "/threads4";
    cfg_t4.threads = 4;
    PipelineResult r1 = run_pipeline(cfg_t1);
    PipelineResult r4 = run_pipeline(cfg_t4);
    set_thread_count(0);
    REQUIRE(r1.manifest.size() == r4.manifest.size());
    for (size_t i = 0; i < r1.manifest.size(); ++i) {
      CHECK(r1.manifest[i].second == r4.manifest[i].second);
      CHECK(r1.manifest[i].first == r4.manifest[i].first);
    }
  }

  SUBCASE("a different seed changes the corpus hash") {
    PipelineConfig cfg3 = config_from_text(synth_config_text(78));
    cfg3.out_dir = dir + "/run3";
    PipelineResult other = run_pipeline(cfg3);
    std::string h1, h3;
    for (const auto& [hash, path] : result.manifest)
      if (path == "corpus.jsonl") h1 = hash;
    for (const auto& [hash, path] : other.manifest)
      if (path == "corpus.jsonl") h3 = hash;
    CHECK(h1 != h3);
  }

  SUBCASE("the 80/20 split is disjoint, exhaustive and roughly stratified") {
    // reread planted labels and labels.tsv; recompute the split bounds
    std::string planted = read_file(cfg.out_dir + "/planted_labels.tsv");
    auto pairs = labels_from_text(planted);
    size_t n = pairs.size();
    size_t n_test = static_cast<size_t>(std::llround(n * 0.2));
    size_t n_train = n - n_test;
    CHECK(n_train + n_test == n);

    // class fractions in the test suffix within +-10pp of 20%
    std::map<Sentiment, size_t> total, in_test;
    for (size_t i = 0; i < pairs.size(); ++i) {
      ++total[pairs[i].second];
      if (i >= n_train) ++in_test[pairs[i].second];
    }
    for (const auto& [sentiment, count] : total) {
      double fraction = double(in_test[sentiment]) / double(count);
      CHECK(fraction > 0.10);
      CHECK(fraction < 0.30);
    }
  }
}

TEST_CASE("lda input flag") {
  SUBCASE("bad value is rejected") {
    std::string text = synth_config_text(1);
    text.replace(text.find("sweeps = 60"), 11, "input = \"x\"\nsweeps = 60");
    CHECK_THROWS_WITH_AS(config_from_text(text),
                         doctest::Contains("rounded_tfidf"), Error);
  }
  SUBCASE("rounded_tfidf runs end to end") {
    auto dir = testutil::scratch_dir("pipeline_lda_input");
    std::string text = synth_config_text(31);
    text.replace(text.find("k_values = [3, 2]"), 17, "k_values = [2]\ninput = \"rounded_tfidf\"");
    PipelineConfig cfg = config_from_text(text);
    CHECK(cfg.lda_input == "rounded_tfidf");
    cfg.out_dir = dir + "/out";
    PipelineResult result = run_pipeline(cfg);
    bool found = false;
    for (const auto& [hash, path] : result.manifest)
      if (path == "lda_k2.txt") found = true;
    CHECK(found);
  }
}

TEST_CASE("pipeline failures name the stage and leave a partial manifest") {
  auto dir = testutil::scratch_dir("pipeline_fail");
  PipelineConfig cfg;
  cfg.out_dir = dir + "/out";
  IngestSource src;
  src.source = Source::reddit;
  src.files = {dir + "/does_not_exist.jsonl"};
  cfg.ingest.push_back(src);

  try {
    run_pipeline(cfg);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("[stage ingest]") != std::string::npos);
  }
  CHECK(std::filesystem::exists(cfg.out_dir + "/manifest.txt"));
}

TEST_CASE("planted-majority labeling requires planted labels") {
  auto dir = testutil::scratch_dir("pipeline_label_mode");
  // build a real corpus file via a tiny synth run, then ingest it with
  // planted-majority requested: that must fail at the label stage
  PipelineConfig synth_cfg = config_from_text(synth_config_text(3));
  synth_cfg.out_dir = dir + "/synth";
  run_pipeline(synth_cfg);

  std::string cfg_text =
      "[ingest]\nreddit_files = [\"" + dir + "/synth/corpus.jsonl\"]\n"
      "reddit_id = \"id\"\nreddit_category = \"category\"\n"
      "reddit_title = \"title\"\nreddit_body = \"body\"\n"
      "[label]\nmode = \"planted-majority\"\ncluster_k = 4\n"
      "[kmeans]\nk_values = [4]\nn_init = 2\n"
      "[tsne]\nn_iter = 60\nexaggeration_iters = 20\nmomentum_switch_iter = 20\n"
      "perplexity = 10.0\n"
      "[lda]\nk_values = [2]\nsweeps = 20\nburn_in = 10\n"
      "[train]\nepochs = 1\nhidden_units = 8\n"
      "[grid]\narchitectures = [\"dnn\"]\ndropouts = [0.3]\n";
  PipelineConfig cfg = config_from_text(cfg_text);
  cfg.out_dir = dir + "/out";
  try {
    run_pipeline(cfg);
    FAIL("expected label-stage failure");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("[stage label]") != std::string::npos);
    CHECK(std::string(e.what()).find("planted") != std::string::npos);
  }
}
