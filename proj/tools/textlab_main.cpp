// textlab: unsupervised corpus labeling and small-net training pipeline.
//
// Subcommands mirror the pipeline stages; run-all chains everything and
// writes a hashed artifact manifest. Exit codes: 0 ok, 1 usage/config,
// 2 data error, 3 numeric failure.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "textlab/config.hpp"
#include "textlab/corpus.hpp"
#include "textlab/error.hpp"
#include "textlab/kmeans.hpp"
#include "textlab/labeling.hpp"
#include "textlab/lda.hpp"
#include "textlab/metrics.hpp"
#include "textlab/nn.hpp"
#include "textlab/parallel.hpp"
#include "textlab/pipeline.hpp"
#include "textlab/preprocess.hpp"
#include "textlab/rng.hpp"
#include "textlab/tables.hpp"
#include "textlab/text_io.hpp"
#include "textlab/tfidf.hpp"
#include "textlab/tsne.hpp"

namespace {

using namespace textlab;

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = "out";
  int64_t seed = -1;  // -1: take from config (or 0)
  unsigned threads = 0;
};

PipelineConfig load_cfg(const GlobalOpts& g) {
  if (g.config_path.empty()) throw_config("--config PATH is required");
  PipelineConfig cfg = load_pipeline_config(g.config_path);
  if (g.seed >= 0) cfg.seed = static_cast<uint64_t>(g.seed);
  if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
  if (g.threads > 0) cfg.threads = g.threads;
  return cfg;
}

void ensure_out(const std::string& dir) {
  std::filesystem::create_directories(dir);
}

std::vector<Sentiment> sentiments_for_rows(const SparseMatrix& matrix,
                                           const std::string& labels_path) {
  auto pairs = labels_from_text(read_file(labels_path));
  std::map<size_t, Sentiment> by_doc(pairs.begin(), pairs.end());
  std::vector<Sentiment> out;
  out.reserve(matrix.n_rows);
  for (size_t r = 0; r < matrix.n_rows; ++r) {
    auto it = by_doc.find(matrix.row_doc_index[r]);
    if (it == by_doc.end())
      throw_data("labels file has no entry for doc_index " +
                 std::to_string(matrix.row_doc_index[r]));
    out.push_back(it->second);
  }
  return out;
}

void split_rows(size_t n_rows, double test_fraction,
                std::vector<size_t>& train_rows, std::vector<size_t>& test_rows) {
  size_t n_test = static_cast<size_t>(
      std::llround(static_cast<double>(n_rows) * test_fraction));
  if (n_rows < 2) throw_data("need at least 2 rows to split");
  n_test = std::clamp<size_t>(n_test, 1, n_rows - 1);
  for (size_t r = 0; r + n_test < n_rows; ++r) train_rows.push_back(r);
  for (size_t r = n_rows - n_test; r < n_rows; ++r) test_rows.push_back(r);
}

int run_cli(int argc, char** argv) {
  CLI::App app{"textlab: unsupervised text labeling and neural net pipeline"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "pipeline config file");
  app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "global seed (overrides config)");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");

  // ---- synth / ingest ----
  auto* synth_cmd = app.add_subcommand(
      "synth", "generate a synthetic corpus with planted sentiment labels")->fallthrough();
  auto* ingest_cmd = app.add_subcommand(
      "ingest", "parse + merge + shuffle JSONL inputs into a corpus")->fallthrough();

  // ---- preprocess ----
  auto* pre_cmd = app.add_subcommand(
      "preprocess", "normalize/tokenize/stopword/stem a corpus")->fallthrough();
  std::string pre_corpus;
  std::string pre_stopwords;
  size_t pre_min_len = 1;
  pre_cmd->add_option("--corpus", pre_corpus, "corpus JSONL path");
  pre_cmd->add_option("--stopwords", pre_stopwords, "stopword list file");
  pre_cmd->add_option("--min-token-length", pre_min_len,
                      "drop shorter tokens");

  // ---- vectorize ----
  auto* vec_cmd = app.add_subcommand("vectorize", "build TF-IDF matrix")->fallthrough();
  std::string vec_tokens;
  size_t vec_min_df = 1;
  double vec_max_df = 1.0;
  vec_cmd->add_option("--tokens", vec_tokens, "tokenized corpus path");
  vec_cmd->add_option("--min-df", vec_min_df, "minimum document frequency");
  vec_cmd->add_option("--max-df", vec_max_df, "maximum df fraction");

  // ---- cluster ----
  auto* cluster_cmd = app.add_subcommand("cluster", "k-means over TF-IDF rows")->fallthrough();
  std::string cl_matrix, cl_vocab;
  size_t cl_k = 8, cl_n_init = 10, cl_max_iter = 300, cl_top = 10;
  double cl_tol = 1e-4;
  cluster_cmd->add_option("--matrix", cl_matrix, "matrix file");
  cluster_cmd->add_option("--k", cl_k, "clusters")->capture_default_str();
  cluster_cmd->add_option("--n-init", cl_n_init, "restarts");
  cluster_cmd->add_option("--max-iter", cl_max_iter, "Lloyd iteration cap");
  cluster_cmd->add_option("--tol", cl_tol, "centroid shift tolerance");
  cluster_cmd->add_option("--vocab", cl_vocab, "vocabulary (for top terms)");
  cluster_cmd->add_option("--top-terms", cl_top, "terms per cluster");

  // ---- embed ----
  auto* embed_cmd = app.add_subcommand("embed", "2-D t-SNE of TF-IDF rows")->fallthrough();
  std::string em_matrix;
  double em_perplexity = 50.0, em_lr = 200.0;
  size_t em_iters = 1000;
  embed_cmd->add_option("--matrix", em_matrix, "matrix file");
  embed_cmd->add_option("--perplexity", em_perplexity, "target perplexity")
      ->capture_default_str();
  embed_cmd->add_option("--iters", em_iters, "iterations")
      ->capture_default_str();
  embed_cmd->add_option("--learning-rate", em_lr, "step size");

  // ---- topics ----
  auto* topics_cmd = app.add_subcommand("topics", "LDA via collapsed Gibbs")->fallthrough();
  std::string tp_tokens, tp_vocab;
  size_t tp_k = 8, tp_sweeps = 1000, tp_burn = 800, tp_top = 20;
  topics_cmd->add_option("--tokens", tp_tokens, "tokenized corpus path");
  topics_cmd->add_option("--vocab", tp_vocab, "vocabulary file");
  topics_cmd->add_option("--k", tp_k, "topics")->capture_default_str();
  topics_cmd->add_option("--sweeps", tp_sweeps, "Gibbs sweeps");
  topics_cmd->add_option("--burn-in", tp_burn, "burn-in sweeps");
  topics_cmd->add_option("--top-terms", tp_top, "terms per topic");

  // ---- label ----
  auto* label_cmd =
      app.add_subcommand("label", "cluster assignments -> sentiment labels")->fallthrough();
  std::string lb_model, lb_corpus, lb_matrix, lb_mapping;
  label_cmd->add_option("--model", lb_model, "k-means model file");
  label_cmd->add_option("--corpus", lb_corpus, "corpus JSONL path");
  label_cmd->add_option("--matrix", lb_matrix, "matrix file (row->doc map)");
  label_cmd->add_option("--mapping", lb_mapping,
                        "mapping file (default: the recorded analyst mapping)");

  // ---- train ----
  auto* train_cmd = app.add_subcommand("train", "train one network")->fallthrough();
  std::string tr_matrix, tr_labels, tr_corpus, tr_arch = "dnn",
              tr_task = "sentiment";
  double tr_dropout = 0.0, tr_val_fraction = 0.2, tr_lr = 0.001,
         tr_test_fraction = 0.2;
  size_t tr_epochs = 15, tr_batch = 32, tr_hidden = 64;
  train_cmd->add_option("--matrix", tr_matrix, "matrix file");
  train_cmd->add_option("--labels", tr_labels, "labels file (sentiment task)");
  train_cmd->add_option("--corpus", tr_corpus, "corpus (classification task)");
  train_cmd->add_option("--arch", tr_arch, "dnn|cnn1d")->capture_default_str();
  train_cmd->add_option("--dropout", tr_dropout, "dropout rate")
      ->capture_default_str();
  train_cmd->add_option("--task", tr_task, "sentiment|classification")
      ->capture_default_str();
  train_cmd->add_option("--epochs", tr_epochs, "epochs")->capture_default_str();
  train_cmd->add_option("--batch-size", tr_batch, "minibatch size");
  train_cmd->add_option("--val-fraction", tr_val_fraction, "validation share");
  train_cmd->add_option("--test-fraction", tr_test_fraction, "test share");
  train_cmd->add_option("--learning-rate", tr_lr, "Adam learning rate");
  train_cmd->add_option("--hidden-units", tr_hidden, "dnn hidden width");

  // ---- evaluate ----
  auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a checkpoint")->fallthrough();
  std::string ev_net, ev_matrix, ev_labels, ev_corpus,
      ev_task = "sentiment";
  double ev_test_fraction = 0.2;
  bool ev_all = false;
  eval_cmd->add_option("--net", ev_net, "checkpoint file");
  eval_cmd->add_option("--matrix", ev_matrix, "matrix file");
  eval_cmd->add_option("--labels", ev_labels, "labels file (sentiment)");
  eval_cmd->add_option("--corpus", ev_corpus, "corpus (classification)");
  eval_cmd->add_option("--task", ev_task, "sentiment|classification");
  eval_cmd->add_option("--test-fraction", ev_test_fraction, "test share");
  eval_cmd->add_flag("--all", ev_all, "evaluate on every row, not the suffix");

  // ---- report ----
  auto* report_cmd =
      app.add_subcommand("report", "emit the report tables from a grid CSV")->fallthrough();
  std::string rp_grid;
  report_cmd->add_option("--grid", rp_grid, "grid CSV path");

  // ---- run-all ----
  auto* runall_cmd = app.add_subcommand(
      "run-all", "full pipeline: ingest .. figures, with manifest")->fallthrough();

  // ---- grad-check ----
  auto* gc_cmd = app.add_subcommand(
      "grad-check", "finite-difference verification of both architectures")->fallthrough();
  size_t gc_trials = 2;
  double gc_tolerance = 1e-4;
  gc_cmd->add_option("--trials", gc_trials, "random instances per case");
  gc_cmd->add_option("--tolerance", gc_tolerance, "max relative error");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors are exit 1; --help is 0
  }
  set_thread_count(g.threads);

  if (synth_cmd->parsed()) {
    PipelineConfig cfg = load_cfg(g);
    if (!cfg.use_synth) throw_config("synth: config has no [synth] section");
    ensure_out(cfg.out_dir);
    SyntheticCorpus sc = generate_synthetic(cfg.synth);
    save_corpus(sc.corpus, cfg.out_dir + "/corpus.jsonl");
    std::string lines;
    for (size_t i = 0; i < sc.planted_labels.size(); ++i)
      lines += std::to_string(i) + "\t" + sentiment_name(sc.planted_labels[i]) +
               "\n";
    write_file(cfg.out_dir + "/planted_labels.tsv", lines);
    std::cout << "wrote " << sc.corpus.documents.size() << " documents, "
              << sc.corpus.categories.size() << " categories to "
              << cfg.out_dir << "/corpus.jsonl\n";
    return 0;
  }

  if (ingest_cmd->parsed()) {
    PipelineConfig cfg = load_cfg(g);
    if (cfg.use_synth)
      throw_config("ingest: config uses [synth]; run `synth` instead");
    ensure_out(cfg.out_dir);
    std::vector<std::vector<Document>> parts;
    size_t skipped = 0;
    for (const auto& src : cfg.ingest) {
      for (const auto& file : src.files) {
        ParsedLines parsed = parse_jsonl_file(file, src.source, src.field_map);
        skipped += parsed.skipped;
        parts.push_back(std::move(parsed.documents));
      }
    }
    Corpus corpus = merge_corpora(parts);
    corpus = shuffle(corpus, Rng::derive(cfg.seed, 1));
    save_corpus(corpus, cfg.out_dir + "/corpus.jsonl");
    std::cout << "wrote " << corpus.documents.size() << " documents ("
              << skipped << " malformed lines skipped) to " << cfg.out_dir
              << "/corpus.jsonl\n";
    return 0;
  }

  if (pre_cmd->parsed()) {
    ensure_out(g.out_dir);
    if (pre_corpus.empty()) pre_corpus = g.out_dir + "/corpus.jsonl";
    Corpus corpus = load_corpus(pre_corpus);
    StopwordList custom;
    PreprocessOptions opts;
    opts.min_token_length = pre_min_len;
    if (!pre_stopwords.empty()) {
      custom = load_stopwords(pre_stopwords);
      opts.stopwords = &custom;
    }
    PreprocessResult res = preprocess_corpus(corpus, opts);
    save_tokenized(res.docs, g.out_dir + "/tokenized.tsv");
    std::cout << "kept " << res.docs.size() << " docs (dropped "
              << res.dropped_empty.size() << " empty, "
              << res.dropped_duplicate.size() << " duplicates)\n";
    return 0;
  }

  if (vec_cmd->parsed()) {
    ensure_out(g.out_dir);
    if (vec_tokens.empty()) vec_tokens = g.out_dir + "/tokenized.tsv";
    auto docs = load_tokenized(vec_tokens);
    Vocabulary vocab = build_vocabulary(docs, vec_min_df, vec_max_df);
    SparseMatrix matrix = vectorize(docs, vocab);
    save_vocab(vocab, g.out_dir + "/vocab.tsv");
    save_matrix(matrix, g.out_dir + "/tfidf.txt");
    std::cout << "vocabulary " << vocab.size() << " terms, matrix "
              << matrix.n_rows << "x" << matrix.n_cols << "\n";
    return 0;
  }

  if (cluster_cmd->parsed()) {
    ensure_out(g.out_dir);
    if (cl_matrix.empty()) cl_matrix = g.out_dir + "/tfidf.txt";
    SparseMatrix matrix = load_matrix(cl_matrix);
    KmeansConfig kc;
    kc.k = cl_k;
    kc.n_init = cl_n_init;
    kc.max_iter = cl_max_iter;
    kc.tol = cl_tol;
    kc.seed = g.seed >= 0 ? static_cast<uint64_t>(g.seed) : 0;
    ClusterModel model = kmeans_fit(matrix, kc);
    save_cluster_model(model, g.out_dir + "/kmeans_k" + std::to_string(cl_k) +
                                  ".txt");
    std::cout << "k=" << cl_k << " inertia " << format_double(model.inertia)
              << " after " << model.n_iter_run << " iterations\n";
    if (!cl_vocab.empty()) {
      Vocabulary vocab = load_vocab(cl_vocab);
      auto terms = top_terms(model, vocab, cl_top);
      std::string tt;
      for (size_t c = 0; c < terms.size(); ++c)
        for (size_t r = 0; r < terms[c].size(); ++r)
          tt += std::to_string(c) + "\t" + std::to_string(r + 1) + "\t" +
                terms[c][r] + "\n";
      write_file(g.out_dir + "/kmeans_top_terms_k" + std::to_string(cl_k) +
                     ".tsv",
                 tt);
    }
    return 0;
  }

  if (embed_cmd->parsed()) {
    ensure_out(g.out_dir);
    if (em_matrix.empty()) em_matrix = g.out_dir + "/tfidf.txt";
    SparseMatrix matrix = load_matrix(em_matrix);
    TsneConfig tc;
    tc.perplexity = em_perplexity;
    tc.n_iter = em_iters;
    tc.learning_rate = em_lr;
    tc.seed = g.seed >= 0 ? static_cast<uint64_t>(g.seed) : 0;
    std::vector<size_t> failed;
    Embedding2D emb = tsne_run(matrix, tc, &failed);
    save_embedding(emb, g.out_dir + "/tsne.txt");
    write_file(g.out_dir + "/tsne_kl_trace.txt", kl_trace_to_text(emb));
    std::cout << "embedded " << emb.coords.size() << " rows, final KL "
              << format_double(emb.kl_trace.back()) << ", "
              << failed.size() << " non-converged rows\n";
    return 0;
  }

  if (topics_cmd->parsed()) {
    ensure_out(g.out_dir);
    if (tp_tokens.empty()) tp_tokens = g.out_dir + "/tokenized.tsv";
    if (tp_vocab.empty()) tp_vocab = g.out_dir + "/vocab.tsv";
    auto docs = load_tokenized(tp_tokens);
    Vocabulary vocab = load_vocab(tp_vocab);
    LdaConfig lc;
    lc.n_topics = tp_k;
    lc.sweeps = tp_sweeps;
    lc.burn_in = tp_burn;
    lc.seed = g.seed >= 0 ? static_cast<uint64_t>(g.seed) : 0;
    TopicModel model = lda_fit(docs, vocab, lc);
    save_topic_model(model, g.out_dir + "/lda_k" + std::to_string(tp_k) +
                                ".txt");
    auto terms = lda_top_terms(model, vocab, tp_top);
    write_file(g.out_dir + "/lda_top_terms_k" + std::to_string(tp_k) + ".tsv",
               top_terms_to_text(terms));
    std::cout << "lda k=" << tp_k << " log-likelihood "
              << format_double(lda_log_likelihood(model.final_state)) << "\n";
    return 0;
  }

  if (label_cmd->parsed()) {
    ensure_out(g.out_dir);
    if (lb_model.empty()) lb_model = g.out_dir + "/kmeans_k8.txt";
    if (lb_corpus.empty()) lb_corpus = g.out_dir + "/corpus.jsonl";
    if (lb_matrix.empty()) lb_matrix = g.out_dir + "/tfidf.txt";
    ClusterModel model = load_cluster_model(lb_model);
    Corpus corpus = load_corpus(lb_corpus);
    SparseMatrix matrix = load_matrix(lb_matrix);
    SentimentMapping mapping =
        lb_mapping.empty() ? default_mapping() : load_mapping(lb_mapping);
    mapping.validate(model.k(), corpus);
    std::vector<std::string> row_categories;
    for (size_t r = 0; r < matrix.n_rows; ++r)
      row_categories.push_back(
          corpus.documents[matrix.row_doc_index[r]].category);
    LabeledSet set = apply_mapping(model.assignments, mapping, row_categories);
    write_file(g.out_dir + "/labels.tsv",
               labels_to_text(set, matrix.row_doc_index));
    ClassBalance balance = class_balance(set.labels);
    std::cout << "labels: negative " << balance.counts[0] << ", neutral "
              << balance.counts[1] << ", positive " << balance.counts[2]
              << "\n";
    return 0;
  }

  if (train_cmd->parsed()) {
    ensure_out(g.out_dir);
    if (tr_matrix.empty()) tr_matrix = g.out_dir + "/tfidf.txt";
    SparseMatrix matrix = load_matrix(tr_matrix);
    Task task = task_from_name(tr_task);

    DenseMatrix targets;
    size_t n_classes = 0;
    std::vector<std::string> class_names;
    if (task == Task::sentiment) {
      if (tr_labels.empty()) tr_labels = g.out_dir + "/labels.tsv";
      auto sentiments = sentiments_for_rows(matrix, tr_labels);
      n_classes = 3;
      class_names = {"negative", "neutral", "positive"};
      targets = DenseMatrix(matrix.n_rows, 3);
      for (size_t r = 0; r < matrix.n_rows; ++r)
        targets.at(r, static_cast<size_t>(sentiments[r])) = 1.0;
    } else {
      if (tr_corpus.empty()) tr_corpus = g.out_dir + "/corpus.jsonl";
      Corpus corpus = load_corpus(tr_corpus);
      n_classes = corpus.categories.size();
      class_names = corpus.categories;
      targets = DenseMatrix(matrix.n_rows, n_classes);
      for (size_t r = 0; r < matrix.n_rows; ++r)
        targets.at(r, corpus.category_index(
                           corpus.documents[matrix.row_doc_index[r]].category)) =
            1.0;
    }

    std::vector<size_t> train_rows, test_rows;
    split_rows(matrix.n_rows, tr_test_fraction, train_rows, test_rows);

    NetSpec spec;
    spec.architecture = architecture_from_name(tr_arch);
    spec.input_dim = matrix.n_cols;
    spec.hidden_units = tr_hidden;
    spec.n_classes = n_classes;
    spec.dropout_rate = tr_dropout;
    spec.seed = g.seed >= 0 ? static_cast<uint64_t>(g.seed) : 0;

    TrainConfig tc;
    tc.epochs = tr_epochs;
    tc.batch_size = tr_batch;
    tc.val_fraction = tr_val_fraction;
    tc.learning_rate = tr_lr;
    tc.shuffle_seed = Rng::derive(spec.seed, 6);

    DenseMatrix train_y(train_rows.size(), n_classes);
    for (size_t i = 0; i < train_rows.size(); ++i)
      std::copy_n(&targets.data[train_rows[i] * n_classes], n_classes,
                  &train_y.data[i * n_classes]);
    TrainResult res = net_train(spec, matrix, train_rows, train_y, tc);

    std::string name = tr_arch + "_d" + format_double(tr_dropout) + "_" +
                       tr_task;
    save_net(res.net, g.out_dir + "/net_" + name + ".txt");
    write_file(g.out_dir + "/history_" + name + ".csv",
               history_to_csv(res.history));

    Predictions pred = net_predict(res.net, matrix, test_rows);
    std::vector<size_t> y_true;
    for (size_t r : test_rows) {
      const double* row = &targets.data[r * n_classes];
      y_true.push_back(std::max_element(row, row + n_classes) - row);
    }
    EvalReport report = classification_report(
        confusion_matrix(y_true, pred.classes, n_classes), class_names);
    write_file(g.out_dir + "/eval_" + name + ".txt", report.to_text());
    std::cout << "final train acc "
              << format_double(res.history.train_acc.back()) << ", val acc "
              << format_double(res.history.val_acc.back()) << ", test acc "
              << format_double(report.accuracy) << "\n";
    return 0;
  }

  if (eval_cmd->parsed()) {
    if (ev_net.empty()) throw_config("evaluate: --net PATH is required");
    if (ev_matrix.empty()) ev_matrix = g.out_dir + "/tfidf.txt";
    TrainedNet net = load_net(ev_net);
    SparseMatrix matrix = load_matrix(ev_matrix);
    Task task = task_from_name(ev_task);

    std::vector<size_t> y_true_all;
    std::vector<std::string> class_names;
    if (task == Task::sentiment) {
      if (ev_labels.empty()) ev_labels = g.out_dir + "/labels.tsv";
      auto sentiments = sentiments_for_rows(matrix, ev_labels);
      for (Sentiment s : sentiments)
        y_true_all.push_back(static_cast<size_t>(s));
      class_names = {"negative", "neutral", "positive"};
    } else {
      if (ev_corpus.empty()) ev_corpus = g.out_dir + "/corpus.jsonl";
      Corpus corpus = load_corpus(ev_corpus);
      for (size_t r = 0; r < matrix.n_rows; ++r)
        y_true_all.push_back(corpus.category_index(
            corpus.documents[matrix.row_doc_index[r]].category));
      class_names = corpus.categories;
    }

    std::vector<size_t> rows;
    if (ev_all) {
      for (size_t r = 0; r < matrix.n_rows; ++r) rows.push_back(r);
    } else {
      std::vector<size_t> train_rows;
      split_rows(matrix.n_rows, ev_test_fraction, train_rows, rows);
    }
    Predictions pred = net_predict(net, matrix, rows);
    std::vector<size_t> y_true;
    for (size_t r : rows) y_true.push_back(y_true_all[r]);
    EvalReport report = classification_report(
        confusion_matrix(y_true, pred.classes, net.spec.n_classes),
        class_names);
    std::cout << report.to_text();
    return 0;
  }

  if (report_cmd->parsed()) {
    ensure_out(g.out_dir);
    if (rp_grid.empty()) rp_grid = g.out_dir + "/grid.csv";
    ExperimentGrid grid = grid_from_csv(read_file(rp_grid));

    // table 3 covers the sentiment combinations present in the grid;
    // table 2 uses the model that ran both tasks
    std::vector<Architecture> archs;
    std::vector<double> dropouts;
    for (const auto& r : grid.rows) {
      if (r.task != Task::sentiment) continue;
      if (std::find(archs.begin(), archs.end(), r.architecture) == archs.end())
        archs.push_back(r.architecture);
      bool seen = false;
      for (double d : dropouts)
        if (std::abs(d - r.dropout_rate) < 1e-9) seen = true;
      if (!seen) dropouts.push_back(r.dropout_rate);
    }
    const GridRow* classification = nullptr;
    for (const auto& r : grid.rows)
      if (r.task == Task::classification) classification = &r;
    if (!classification)
      throw_data("report: the grid has no classification row for table 2");

    std::string t2 = emit_table2(grid, classification->architecture,
                                 classification->dropout_rate);
    std::string t3 = emit_table3(grid, archs, dropouts);
    write_file(g.out_dir + "/table2.txt", t2);
    write_file(g.out_dir + "/table3.txt", t3);
    std::cout << t2 << "\n" << t3;
    return 0;
  }

  if (runall_cmd->parsed()) {
    PipelineConfig cfg = load_cfg(g);
    PipelineResult result = run_pipeline(cfg);
    std::cout << "pipeline complete: " << result.manifest.size()
              << " artifacts in " << result.out_dir << " (corpus "
              << result.corpus_size << " docs, vocabulary "
              << result.vocab_size << " terms)\n";
    for (const auto& [name, acc] : result.planted_test_accuracy)
      std::cout << name << " planted-label test accuracy "
                << format_double(acc) << "\n";
    return 0;
  }

  if (gc_cmd->parsed()) {
    GradCheckReport report = grad_check(gc_trials, gc_tolerance);
    std::cout << report.to_text();
    return report.pass ? 0 : 3;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
