#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "textlab/config.hpp"
#include "textlab/corpus.hpp"
#include "textlab/kmeans.hpp"
#include "textlab/labeling.hpp"
#include "textlab/lda.hpp"
#include "textlab/nn.hpp"
#include "textlab/tables.hpp"
#include "textlab/tsne.hpp"

namespace textlab {

enum class LabelMode { config, planted_majority };

struct IngestSource {
  Source source = Source::reddit;
  std::vector<std::string> files;
  FieldMap field_map;
};

// Everything run-all needs, parsed from one config file. Seeds for the
// stages are derived from the global seed (see seed derivation in
// pipeline.cpp); the CLI may override seed, out_dir and threads.
struct PipelineConfig {
  uint64_t seed = 0;
  std::string out_dir = "out";
  unsigned threads = 0;

  bool use_synth = false;
  SyntheticSpec synth;
  std::vector<IngestSource> ingest;

  std::string stopword_file;  // empty -> builtin list
  size_t min_token_length = 1;

  size_t min_df = 1;
  double max_df_fraction = 1.0;

  std::vector<size_t> kmeans_ks = {8, 3, 2};
  size_t kmeans_n_init = 10;
  size_t kmeans_max_iter = 300;
  double kmeans_tol = 1e-4;
  size_t kmeans_top_terms = 10;

  TsneConfig tsne;

  std::vector<size_t> lda_ks = {8, 3, 2};
  size_t lda_sweeps = 1000;
  size_t lda_burn_in = 800;
  double lda_alpha = 0.0;  // 0 -> 1/K
  double lda_beta = 0.0;
  size_t lda_top_terms = 20;
  // "counts" feeds token counts (LDA's generative model); "rounded_tfidf"
  // replicates the literal run-LDA-on-the-tfidf-matrix reading by scaling
  // each row back to its token count and rounding to integers.
  std::string lda_input = "counts";

  LabelMode label_mode = LabelMode::config;
  bool label_mode_set = false;       // false -> synth defaults to planted
  std::string mapping_file;          // optional external mapping
  std::optional<SentimentMapping> inline_mapping;
  size_t label_cluster_k = 8;

  TrainConfig train;
  double test_fraction = 0.2;
  size_t dnn_hidden_units = 64;
  std::vector<Architecture> grid_architectures = {Architecture::dnn,
                                                  Architecture::cnn1d};
  std::vector<double> grid_dropouts = {0.0, 0.3, 0.6};
  double table2_dropout = 0.3;
};

PipelineConfig parse_pipeline_config(const ConfigDoc& doc);
PipelineConfig load_pipeline_config(const std::string& path);

struct PipelineResult {
  std::string out_dir;
  // (sha256 hex, relative path), sorted by path; mirrors manifest.txt.
  std::vector<std::pair<std::string, std::string>> manifest;
  ExperimentGrid grid;
  // Synthetic runs only: test accuracy of each sentiment run measured
  // against the planted labels, keyed by run name (e.g. "dnn_d0.3").
  std::map<std::string, double> planted_test_accuracy;
  size_t corpus_size = 0;
  size_t vocab_size = 0;
};

// ingest -> preprocess -> vectorize -> {kmeans, tsne, lda} -> label ->
// split -> train grid -> evaluate -> figures/tables -> manifest.
// On a stage failure the partial manifest is still written and the error is
// rethrown with the stage name prepended.
PipelineResult run_pipeline(const PipelineConfig& config);

// Majority planted sentiment per cluster; the synthetic stand-in for the
// analyst judgment step.
SentimentMapping mapping_from_planted(const std::vector<size_t>& assignments,
                                      const std::vector<Sentiment>& planted,
                                      size_t k);

std::string manifest_to_text(
    const std::vector<std::pair<std::string, std::string>>& manifest);

}  // namespace textlab
