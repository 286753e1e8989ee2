#include "textlab/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "textlab/error.hpp"
#include "textlab/metrics.hpp"
#include "textlab/parallel.hpp"
#include "textlab/preprocess.hpp"
#include "textlab/rng.hpp"
#include "textlab/sha256.hpp"
#include "textlab/svg_plot.hpp"
#include "textlab/text_io.hpp"

namespace textlab {

namespace {

// Stage seed streams, all derived from the one global seed.
enum SeedStream : uint64_t {
  kSeedShuffle = 1,
  kSeedKmeans = 2,
  kSeedTsne = 3,
  kSeedLda = 4,
  kSeedNetInit = 5,
  kSeedTrainShuffle = 6,
  kSeedSynth = 7,
};

std::string dropout_tag(double d) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", d);
  return buf;
}

SyntheticCategory parse_synth_category(const std::string& entry) {
  auto parts = split(entry, ':');
  if (parts.size() != 2)
    throw_config("[synth] categories entries must be 'source:name', got '" +
                 entry + "'");
  SyntheticCategory cat;
  cat.source = source_from_name(parts[0]);
  cat.name = std::string(parts[1]);
  return cat;
}

}  // namespace

PipelineConfig parse_pipeline_config(const ConfigDoc& doc) {
  PipelineConfig cfg;

  ConfigTable pipeline = doc.section_or_empty("pipeline");
  cfg.seed = static_cast<uint64_t>(pipeline.get_int("seed", 0));
  cfg.out_dir = pipeline.get_string("out_dir", "out");
  cfg.threads = static_cast<unsigned>(pipeline.get_int("threads", 0));

  const ConfigTable* synth = doc.section("synth");
  const ConfigTable* ingest = doc.section("ingest");
  if (!synth && !ingest)
    throw_config("config needs a data source: add a [synth] or [ingest] section");
  if (synth && ingest)
    throw_config("config has both [synth] and [ingest]; pick one data source");

  if (synth) {
    cfg.use_synth = true;
    auto& s = cfg.synth;
    s.n_docs_per_category =
        static_cast<size_t>(synth->get_int("docs_per_category", 100));
    for (const auto& entry : synth->require_string_array("categories"))
      s.categories.push_back(parse_synth_category(entry));
    s.negative_vocab = synth->require_string_array("negative_vocab");
    s.neutral_vocab = synth->require_string_array("neutral_vocab");
    s.positive_vocab = synth->require_string_array("positive_vocab");
    if (synth->has("noise_vocab"))
      s.noise_vocab = synth->require_string_array("noise_vocab");
    s.noise_fraction = synth->get_double("noise_fraction", 0.0);
    s.doc_length_min = static_cast<size_t>(synth->get_int("doc_length_min", 8));
    s.doc_length_max = static_cast<size_t>(synth->get_int("doc_length_max", 30));
    s.seed = synth->has("seed")
                 ? static_cast<uint64_t>(synth->require_int("seed"))
                 : Rng::derive(cfg.seed, kSeedSynth);
  } else {
    for (auto source : {Source::reddit, Source::twitter}) {
      const std::string prefix = source_name(source);
      if (!ingest->has(prefix + "_files")) continue;
      IngestSource is;
      is.source = source;
      is.files = ingest->require_string_array(prefix + "_files");
      is.field_map.id_path = ingest->get_string(prefix + "_id", "id");
      is.field_map.category_path =
          ingest->get_string(prefix + "_category", "category");
      is.field_map.title_path = ingest->get_string(
          prefix + "_title", source == Source::reddit ? "title" : "");
      is.field_map.body_path = ingest->get_string(
          prefix + "_body", source == Source::reddit ? "selftext" : "content");
      if (is.files.empty())
        throw_config("[ingest] " + prefix + "_files lists no input paths");
      cfg.ingest.push_back(std::move(is));
    }
    if (cfg.ingest.empty())
      throw_config("[ingest] section names no input files "
                   "(reddit_files / twitter_files)");
  }

  ConfigTable pre = doc.section_or_empty("preprocess");
  cfg.stopword_file = pre.get_string("stopword_file", "");
  cfg.min_token_length =
      static_cast<size_t>(pre.get_int("min_token_length", 1));

  ConfigTable tfidf = doc.section_or_empty("tfidf");
  cfg.min_df = static_cast<size_t>(tfidf.get_int("min_df", 1));
  cfg.max_df_fraction = tfidf.get_double("max_df_fraction", 1.0);

  ConfigTable km = doc.section_or_empty("kmeans");
  if (km.has("k_values")) {
    cfg.kmeans_ks.clear();
    for (int64_t k : km.require("k_values").as_int_array(km.loc("k_values")))
      cfg.kmeans_ks.push_back(static_cast<size_t>(k));
  }
  cfg.kmeans_n_init = static_cast<size_t>(km.get_int("n_init", 10));
  cfg.kmeans_max_iter = static_cast<size_t>(km.get_int("max_iter", 300));
  cfg.kmeans_tol = km.get_double("tol", 1e-4);
  cfg.kmeans_top_terms = static_cast<size_t>(km.get_int("top_terms", 10));

  ConfigTable ts = doc.section_or_empty("tsne");
  cfg.tsne.perplexity = ts.get_double("perplexity", 50.0);
  cfg.tsne.n_iter = static_cast<size_t>(ts.get_int("n_iter", 1000));
  cfg.tsne.learning_rate = ts.get_double("learning_rate", 200.0);
  cfg.tsne.early_exaggeration = ts.get_double("early_exaggeration", 12.0);
  cfg.tsne.exaggeration_iters =
      static_cast<size_t>(ts.get_int("exaggeration_iters", 250));
  cfg.tsne.momentum_switch_iter =
      static_cast<size_t>(ts.get_int("momentum_switch_iter", 250));
  cfg.tsne.perplexity_tol = ts.get_double("perplexity_tol", 1e-5);
  cfg.tsne.perplexity_max_bisect =
      static_cast<size_t>(ts.get_int("perplexity_max_bisect", 50));

  ConfigTable lda = doc.section_or_empty("lda");
  if (lda.has("k_values")) {
    cfg.lda_ks.clear();
    for (int64_t k : lda.require("k_values").as_int_array(lda.loc("k_values")))
      cfg.lda_ks.push_back(static_cast<size_t>(k));
  }
  cfg.lda_sweeps = static_cast<size_t>(lda.get_int("sweeps", 1000));
  cfg.lda_burn_in = static_cast<size_t>(lda.get_int("burn_in", 800));
  cfg.lda_alpha = lda.get_double("alpha", 0.0);
  cfg.lda_beta = lda.get_double("beta", 0.0);
  cfg.lda_top_terms = static_cast<size_t>(lda.get_int("top_terms", 20));
  cfg.lda_input = lda.get_string("input", "counts");
  if (cfg.lda_input != "counts" && cfg.lda_input != "rounded_tfidf")
    throw_config("[lda] input must be 'counts' or 'rounded_tfidf'");

  ConfigTable label = doc.section_or_empty("label");
  if (label.has("mode")) {
    cfg.label_mode_set = true;
    std::string mode = label.require_string("mode");
    if (mode == "config")
      cfg.label_mode = LabelMode::config;
    else if (mode == "planted-majority")
      cfg.label_mode = LabelMode::planted_majority;
    else
      throw_config("[label] mode must be 'config' or 'planted-majority'");
  }
  cfg.mapping_file = label.get_string("mapping_file", "");
  cfg.label_cluster_k = static_cast<size_t>(label.get_int("cluster_k", 8));

  if (doc.section("mapping")) {
    // inline mapping + overrides, same syntax as a standalone mapping file
    SentimentMapping m;
    const ConfigTable& mt = *doc.section("mapping");
    for (const auto& [key, value] : mt.entries) {
      m.cluster_to_sentiment[static_cast<size_t>(parse_uint(key))] =
          sentiment_from_name(value.as_string(mt.loc(key)));
    }
    for (const ConfigTable* o : doc.array_sections("override"))
      m.overrides.emplace_back(
          o->require_string("category"),
          sentiment_from_name(o->require_string("sentiment")));
    cfg.inline_mapping = std::move(m);
  }

  ConfigTable train = doc.section_or_empty("train");
  cfg.train.epochs = static_cast<size_t>(train.get_int("epochs", 15));
  cfg.train.batch_size = static_cast<size_t>(train.get_int("batch_size", 32));
  cfg.train.val_fraction = train.get_double("val_fraction", 0.2);
  cfg.train.learning_rate = train.get_double("learning_rate", 0.001);
  cfg.train.adam_beta1 = train.get_double("adam_beta1", 0.9);
  cfg.train.adam_beta2 = train.get_double("adam_beta2", 0.999);
  cfg.train.adam_eps = train.get_double("adam_eps", 1e-7);
  cfg.test_fraction = train.get_double("test_fraction", 0.2);
  cfg.dnn_hidden_units = static_cast<size_t>(train.get_int("hidden_units", 64));

  ConfigTable grid = doc.section_or_empty("grid");
  if (grid.has("architectures")) {
    cfg.grid_architectures.clear();
    for (const auto& a : grid.require_string_array("architectures"))
      cfg.grid_architectures.push_back(architecture_from_name(a));
  }
  if (grid.has("dropouts")) {
    cfg.grid_dropouts =
        grid.require("dropouts").as_double_array(grid.loc("dropouts"));
  }
  cfg.table2_dropout = grid.get_double("table2_dropout", 0.3);
  return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path) {
  return parse_pipeline_config(load_config(path));
}

SentimentMapping mapping_from_planted(const std::vector<size_t>& assignments,
                                      const std::vector<Sentiment>& planted,
                                      size_t k) {
  if (assignments.size() != planted.size())
    throw_data("mapping_from_planted: size mismatch");
  std::vector<std::array<size_t, 3>> votes(k, {0, 0, 0});
  for (size_t i = 0; i < assignments.size(); ++i)
    ++votes[assignments[i]][static_cast<size_t>(planted[i])];
  SentimentMapping m;
  for (size_t c = 0; c < k; ++c) {
    size_t best = 0;
    for (size_t s = 1; s < 3; ++s)
      if (votes[c][s] > votes[c][best]) best = s;
    m.cluster_to_sentiment[c] = static_cast<Sentiment>(best);
  }
  return m;
}

std::string manifest_to_text(
    const std::vector<std::pair<std::string, std::string>>& manifest) {
  std::string out = "manifest v1 sha256\n";
  for (const auto& [hash, path] : manifest) {
    out += hash;
    out += "  ";
    out += path;
    out.push_back('\n');
  }
  return out;
}

namespace {

struct ArtifactWriter {
  std::string out_dir;
  std::vector<std::pair<std::string, std::string>> entries;

  void write(const std::string& relpath, std::string_view content) {
    write_file(out_dir + "/" + relpath, content);
    entries.emplace_back(Sha256::of_string(content), relpath);
  }

  void finalize() {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    write_file(out_dir + "/manifest.txt", manifest_to_text(entries));
  }
};

struct RunOutcome {
  GridRow row;
  RunHistory history;
  double planted_test_acc = -1.0;
};

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config) {
  set_thread_count(config.threads);
  std::filesystem::create_directories(config.out_dir);

  ArtifactWriter writer{config.out_dir, {}};
  PipelineResult result;
  result.out_dir = config.out_dir;
  std::string stage = "ingest";

  try {
    // ---- ingest ----------------------------------------------------------
    Corpus corpus;
    std::vector<Sentiment> planted;
    if (config.use_synth) {
      SyntheticCorpus sc = generate_synthetic(config.synth);
      corpus = std::move(sc.corpus);
      planted = std::move(sc.planted_labels);
    } else {
      std::vector<std::vector<Document>> parts;
      for (const auto& src : config.ingest) {
        for (const auto& file : src.files)
          parts.push_back(
              parse_jsonl_file(file, src.source, src.field_map).documents);
      }
      corpus = merge_corpora(parts);
    }

    // seed-shuffle; planted labels ride along via the identical permutation
    const uint64_t shuffle_seed = Rng::derive(config.seed, kSeedShuffle);
    std::vector<size_t> perm(corpus.documents.size());
    std::iota(perm.begin(), perm.end(), 0);
    {
      Rng rng(shuffle_seed);
      rng.shuffle(perm);
    }
    corpus = shuffle(corpus, shuffle_seed);
    if (!planted.empty()) {
      std::vector<Sentiment> shuffled(planted.size());
      for (size_t i = 0; i < perm.size(); ++i) shuffled[i] = planted[perm[i]];
      planted = std::move(shuffled);
    }
    result.corpus_size = corpus.documents.size();
    writer.write("corpus.jsonl", corpus_to_jsonl(corpus));
    if (!planted.empty()) {
      std::string lines;
      for (size_t i = 0; i < planted.size(); ++i)
        lines += std::to_string(i) + "\t" + sentiment_name(planted[i]) + "\n";
      writer.write("planted_labels.tsv", lines);
    }

    // ---- preprocess ------------------------------------------------------
    stage = "preprocess";
    StopwordList custom_stopwords;
    PreprocessOptions pre_opts;
    pre_opts.min_token_length = config.min_token_length;
    if (!config.stopword_file.empty()) {
      custom_stopwords = load_stopwords(config.stopword_file);
      pre_opts.stopwords = &custom_stopwords;
    }
    PreprocessResult pre = preprocess_corpus(corpus, pre_opts);
    writer.write("tokenized.tsv", tokenized_to_text(pre.docs));

    // ---- vectorize -------------------------------------------------------
    stage = "vectorize";
    Vocabulary vocab =
        build_vocabulary(pre.docs, config.min_df, config.max_df_fraction);
    result.vocab_size = vocab.size();
    SparseMatrix matrix = vectorize(pre.docs, vocab);
    writer.write("vocab.tsv", vocab_to_text(vocab));
    writer.write("tfidf.txt", matrix_to_text(matrix));

    {
      std::string stats;
      stats += "documents " + std::to_string(corpus.documents.size()) + "\n";
      stats += "categories " + std::to_string(corpus.categories.size()) + "\n";
      stats += "tokenized_docs " + std::to_string(pre.docs.size()) + "\n";
      stats += "dropped_empty " + std::to_string(pre.dropped_empty.size()) + "\n";
      stats += "dropped_duplicate " +
               std::to_string(pre.dropped_duplicate.size()) + "\n";
      stats += "vocabulary " + std::to_string(vocab.size()) + "\n";
      writer.write("stats.txt", stats);
    }

    // rows -> corpus doc metadata
    std::vector<std::string> row_categories;
    std::vector<Sentiment> row_planted;
    for (size_t r = 0; r < matrix.n_rows; ++r) {
      size_t doc = matrix.row_doc_index[r];
      row_categories.push_back(corpus.documents[doc].category);
      if (!planted.empty()) row_planted.push_back(planted[doc]);
    }

    // ---- cluster ---------------------------------------------------------
    stage = "cluster";
    std::map<size_t, ClusterModel> kmeans_models;
    for (size_t k : config.kmeans_ks) {
      KmeansConfig kc;
      kc.k = k;
      kc.n_init = config.kmeans_n_init;
      kc.max_iter = config.kmeans_max_iter;
      kc.tol = config.kmeans_tol;
      kc.seed = Rng::derive(config.seed, kSeedKmeans, k);
      kmeans_models.emplace(k, kmeans_fit(matrix, kc));
    }
    for (const auto& [k, model] : kmeans_models) {
      writer.write("kmeans_k" + std::to_string(k) + ".txt",
                   cluster_model_to_text(model));
      auto terms = top_terms(model, vocab, config.kmeans_top_terms);
      std::string tt;
      for (size_t c = 0; c < terms.size(); ++c) {
        for (size_t r = 0; r < terms[c].size(); ++r)
          tt += std::to_string(c) + "\t" + std::to_string(r + 1) + "\t" +
                terms[c][r] + "\n";
      }
      writer.write("kmeans_top_terms_k" + std::to_string(k) + ".tsv", tt);
    }

    // ---- embed -----------------------------------------------------------
    stage = "embed";
    TsneConfig tsne_cfg = config.tsne;
    tsne_cfg.seed = Rng::derive(config.seed, kSeedTsne);
    std::vector<size_t> tsne_failed;
    Embedding2D embedding = tsne_run(matrix, tsne_cfg, &tsne_failed);
    writer.write("tsne.txt", embedding_to_text(embedding));
    writer.write("tsne_kl_trace.txt", kl_trace_to_text(embedding));
    if (!tsne_failed.empty()) {
      std::string lines;
      for (size_t r : tsne_failed) lines += std::to_string(r) + "\n";
      writer.write("tsne_nonconverged_rows.txt", lines);
    }

    // ---- topics ----------------------------------------------------------
    stage = "topics";
    std::vector<TokenizedDoc> lda_docs = pre.docs;
    if (config.lda_input == "rounded_tfidf") {
      // literal reading: LDA over the tfidf matrix. Rows are unit-norm, so
      // scale each back to its token count before rounding to counts.
      lda_docs.clear();
      for (size_t r = 0; r < matrix.n_rows; ++r) {
        TokenizedDoc d;
        d.doc_index = matrix.row_doc_index[r];
        double scale = static_cast<double>(pre.docs[r].tokens.size());
        for (const auto& e : matrix.rows[r]) {
          auto repeat = static_cast<size_t>(std::llround(e.weight * scale));
          for (size_t i = 0; i < repeat; ++i)
            d.tokens.push_back(vocab.terms[e.col]);
        }
        if (!d.tokens.empty()) lda_docs.push_back(std::move(d));
      }
    }
    std::map<size_t, TopicModel> lda_models;
    for (size_t k : config.lda_ks) {
      LdaConfig lc;
      lc.n_topics = k;
      lc.alpha = config.lda_alpha;
      lc.beta = config.lda_beta;
      lc.sweeps = config.lda_sweeps;
      lc.burn_in = config.lda_burn_in;
      lc.seed = Rng::derive(config.seed, kSeedLda, k);
      lda_models.emplace(k, lda_fit(lda_docs, vocab, lc));
    }
    std::map<size_t, std::vector<std::vector<std::pair<std::string, double>>>>
        lda_terms;
    for (const auto& [k, model] : lda_models) {
      writer.write("lda_k" + std::to_string(k) + ".txt",
                   topic_model_to_text(model));
      lda_terms[k] = lda_top_terms(model, vocab, config.lda_top_terms);
      writer.write("lda_top_terms_k" + std::to_string(k) + ".tsv",
                   top_terms_to_text(lda_terms[k]));
    }

    // ---- label -----------------------------------------------------------
    stage = "label";
    auto model_it = kmeans_models.find(config.label_cluster_k);
    if (model_it == kmeans_models.end())
      throw_config("[label] cluster_k=" + std::to_string(config.label_cluster_k) +
                   " is not among the fitted k-means models");
    const ClusterModel& label_model = model_it->second;

    LabelMode mode = config.label_mode;
    if (!config.label_mode_set && config.use_synth && !row_planted.empty())
      mode = LabelMode::planted_majority;

    SentimentMapping mapping;
    if (mode == LabelMode::planted_majority) {
      if (row_planted.empty())
        throw_config("[label] planted-majority mode needs planted labels "
                     "(synthetic corpus)");
      mapping = mapping_from_planted(label_model.assignments, row_planted,
                                     config.label_cluster_k);
    } else if (!config.mapping_file.empty()) {
      mapping = load_mapping(config.mapping_file);
    } else if (config.inline_mapping) {
      mapping = *config.inline_mapping;
    } else {
      mapping = default_mapping();
    }
    mapping.validate(config.label_cluster_k, corpus);
    writer.write("mapping_used.toml", mapping_to_text(mapping));

    LabeledSet labels =
        apply_mapping(label_model.assignments, mapping, row_categories);
    writer.write("labels.tsv", labels_to_text(labels, matrix.row_doc_index));
    {
      ClassBalance balance = class_balance(labels.labels);
      std::string out;
      const char* names[3] = {"negative", "neutral", "positive"};
      for (size_t c = 0; c < 3; ++c)
        out += std::string(names[c]) + "\t" + std::to_string(balance.counts[c]) +
               "\t" + format_double(balance.fractions[c]) + "\n";
      writer.write("label_balance.tsv", out);
    }

    // ---- train -----------------------------------------------------------
    stage = "train";
    const size_t n_rows = matrix.n_rows;
    size_t n_test = static_cast<size_t>(
        std::llround(static_cast<double>(n_rows) * config.test_fraction));
    n_test = std::clamp<size_t>(n_test, 1, n_rows - 1);
    const size_t n_train = n_rows - n_test;
    std::vector<size_t> train_rows(n_train), test_rows(n_test);
    std::iota(train_rows.begin(), train_rows.end(), 0);
    std::iota(test_rows.begin(), test_rows.end(), n_train);

    DenseMatrix sentiment_targets(n_rows, 3);
    for (size_t r = 0; r < n_rows; ++r)
      sentiment_targets.at(r, static_cast<size_t>(labels.labels[r])) = 1.0;
    const size_t n_categories = corpus.categories.size();
    DenseMatrix category_targets(n_rows, n_categories);
    for (size_t r = 0; r < n_rows; ++r) {
      size_t doc = matrix.row_doc_index[r];
      category_targets.at(
          r, corpus.category_index(corpus.documents[doc].category)) = 1.0;
    }

    struct RunPlan {
      std::string name;
      Architecture architecture;
      double dropout;
      Task task;
    };
    std::vector<RunPlan> plans;
    for (Architecture a : config.grid_architectures)
      for (double d : config.grid_dropouts)
        plans.push_back({architecture_name(a) + "_d" + dropout_tag(d) +
                             "_sentiment",
                         a, d, Task::sentiment});
    plans.push_back({"dnn_d" + dropout_tag(config.table2_dropout) +
                         "_classification",
                     Architecture::dnn, config.table2_dropout,
                     Task::classification});

    std::vector<RunOutcome> outcomes(plans.size());
    std::vector<std::function<void()>> jobs;
    for (size_t r = 0; r < plans.size(); ++r) {
      jobs.push_back([&, r] {
        const RunPlan& plan = plans[r];
        const DenseMatrix& targets = plan.task == Task::sentiment
                                         ? sentiment_targets
                                         : category_targets;
        NetSpec spec;
        spec.architecture = plan.architecture;
        spec.input_dim = matrix.n_cols;
        spec.hidden_units = config.dnn_hidden_units;
        spec.n_classes = targets.cols;
        spec.dropout_rate = plan.dropout;
        spec.seed = Rng::derive(config.seed, kSeedNetInit, r);

        TrainConfig tc = config.train;
        tc.shuffle_seed = Rng::derive(config.seed, kSeedTrainShuffle, r);

        DenseMatrix train_y(train_rows.size(), targets.cols);
        for (size_t i = 0; i < train_rows.size(); ++i)
          std::copy_n(&targets.data[train_rows[i] * targets.cols], targets.cols,
                      &train_y.data[i * targets.cols]);

        TrainResult tr = net_train(spec, matrix, train_rows, train_y, tc);
        Predictions pred = net_predict(tr.net, matrix, test_rows);

        std::vector<size_t> y_true(test_rows.size());
        for (size_t i = 0; i < test_rows.size(); ++i) {
          const double* row = &targets.data[test_rows[i] * targets.cols];
          y_true[i] = std::max_element(row, row + targets.cols) - row;
        }
        ConfusionMatrix cm =
            confusion_matrix(y_true, pred.classes, targets.cols);
        EvalReport report = classification_report(
            cm, plan.task == Task::sentiment
                    ? std::vector<std::string>{"negative", "neutral",
                                               "positive"}
                    : corpus.categories);
        double test_loss = 0.0;
        {
          DenseMatrix probs = pred.probs;
          for (size_t i = 0; i < test_rows.size(); ++i) {
            const double* yrow = &targets.data[test_rows[i] * targets.cols];
            for (size_t c = 0; c < targets.cols; ++c)
              if (yrow[c] != 0.0)
                test_loss -=
                    std::log(std::max(probs.at(i, c), 1e-12)) * yrow[c];
          }
          test_loss /= static_cast<double>(test_rows.size());
        }

        RunOutcome& out = outcomes[r];
        out.history = tr.history;
        out.row.architecture = plan.architecture;
        out.row.dropout_rate = plan.dropout;
        out.row.task = plan.task;
        out.row.train_acc = tr.history.train_acc.back();
        out.row.train_loss = tr.history.train_loss.back();
        out.row.val_acc = tr.history.val_acc.back();
        out.row.val_loss = tr.history.val_loss.back();
        out.row.test_acc = report.accuracy;
        out.row.test_loss = test_loss;

        // synthetic ground truth comparison
        if (!row_planted.empty() && plan.task == Task::sentiment) {
          std::vector<size_t> truth(test_rows.size());
          for (size_t i = 0; i < test_rows.size(); ++i)
            truth[i] = static_cast<size_t>(row_planted[test_rows[i]]);
          ConfusionMatrix pcm = confusion_matrix(truth, pred.classes, 3);
          EvalReport preport = classification_report(
              pcm, {"negative", "neutral", "positive"});
          out.planted_test_acc = preport.accuracy;
        }
        // each job writes only its own checkpoint; manifest entries are
        // registered sequentially afterwards
        save_net(tr.net, config.out_dir + "/net_" + plan.name + ".txt");
      });
    }
    parallel_jobs(jobs);

    // register artifacts sequentially so the manifest stays deterministic
    stage = "evaluate";
    for (size_t r = 0; r < plans.size(); ++r) {
      const RunPlan& plan = plans[r];
      const RunOutcome& out = outcomes[r];
      writer.entries.emplace_back(
          Sha256::of_file(config.out_dir + "/net_" + plan.name + ".txt"),
          "net_" + plan.name + ".txt");
      writer.write("history_" + plan.name + ".csv",
                   history_to_csv(out.history));
      result.grid.add(out.row);
      if (out.planted_test_acc >= 0.0)
        result.planted_test_accuracy["run " + plan.name] = out.planted_test_acc;
    }

    // per-run evaluation reports against the task labels
    for (size_t r = 0; r < plans.size(); ++r) {
      const RunPlan& plan = plans[r];
      const DenseMatrix& targets = plan.task == Task::sentiment
                                       ? sentiment_targets
                                       : category_targets;
      TrainedNet net = load_net(config.out_dir + "/net_" + plan.name + ".txt");
      Predictions pred = net_predict(net, matrix, test_rows);
      std::vector<size_t> y_true(test_rows.size());
      for (size_t i = 0; i < test_rows.size(); ++i) {
        const double* row = &targets.data[test_rows[i] * targets.cols];
        y_true[i] = std::max_element(row, row + targets.cols) - row;
      }
      EvalReport report = classification_report(
          confusion_matrix(y_true, pred.classes, targets.cols),
          plan.task == Task::sentiment
              ? std::vector<std::string>{"negative", "neutral", "positive"}
              : corpus.categories);
      writer.write("eval_" + plan.name + ".txt", report.to_text());
      if (!row_planted.empty() && plan.task == Task::sentiment) {
        std::vector<size_t> truth(test_rows.size());
        for (size_t i = 0; i < test_rows.size(); ++i)
          truth[i] = static_cast<size_t>(row_planted[test_rows[i]]);
        EvalReport preport = classification_report(
            confusion_matrix(truth, pred.classes, 3),
            {"negative", "neutral", "positive"});
        writer.write("eval_planted_" + plan.name + ".txt", preport.to_text());
      }
    }

    // ---- report ----------------------------------------------------------
    stage = "report";
    writer.write("table2.txt",
                 emit_table2(result.grid, Architecture::dnn,
                             config.table2_dropout));
    writer.write("table3.txt", emit_table3(result.grid,
                                           config.grid_architectures,
                                           config.grid_dropouts));
    writer.write("grid.csv", grid_to_csv(result.grid));

    writer.write("fig_tsne_categories.svg",
                 render_scatter(embedding.coords, row_categories,
                                "t-SNE Dimensionality Reduction Mapped by "
                                "Category"));
    {
      std::vector<std::string> cluster_names;
      for (size_t a : label_model.assignments)
        cluster_names.push_back("cluster " + std::to_string(a));
      writer.write("fig_kmeans_tsne.svg",
                   render_scatter(embedding.coords, cluster_names,
                                  "k-means Clustering Mapped to t-SNE Space"));
    }
    for (const auto& [k, terms] : lda_terms) {
      writer.write("fig_lda_topics_k" + std::to_string(k) + ".svg",
                   render_topic_bars(terms, "Top " +
                                                std::to_string(config.lda_top_terms) +
                                                " Terms by LDA Topic Modeling (k=" +
                                                std::to_string(k) + ")"));
    }
    for (Architecture a : config.grid_architectures) {
      std::vector<std::pair<std::string, RunHistory>> series;
      for (size_t r = 0; r < plans.size(); ++r) {
        if (plans[r].task == Task::sentiment && plans[r].architecture == a)
          series.emplace_back(architecture_name(a) + " dropout " +
                                  dropout_tag(plans[r].dropout),
                              outcomes[r].history);
      }
      if (!series.empty())
        writer.write("fig_curves_" + architecture_name(a) + ".svg",
                     render_curves(series,
                                   "Training & Validation Metrics (" +
                                       architecture_name(a) + ")"));
    }
    {
      std::vector<std::pair<std::string, RunHistory>> series;
      for (size_t r = 0; r < plans.size(); ++r) {
        if (std::abs(plans[r].dropout - config.table2_dropout) < 1e-9 &&
            plans[r].architecture == Architecture::dnn)
          series.emplace_back(task_name(plans[r].task), outcomes[r].history);
      }
      if (!series.empty())
        writer.write("fig_curves_tasks.svg",
                     render_curves(series,
                                   "Classification vs Sentiment Training "
                                   "Metrics (DNN)"));
    }

    writer.finalize();
    result.manifest = writer.entries;
    return result;
  } catch (const Error& e) {
    writer.finalize();
    throw Error(e.kind(), "[stage " + stage + "] " + e.what());
  } catch (const std::exception& e) {
    writer.finalize();
    throw Error(ErrorKind::data, "[stage " + stage + "] " + e.what());
  }
}

}  // namespace textlab
