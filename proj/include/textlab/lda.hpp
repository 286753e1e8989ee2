#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "textlab/tfidf.hpp"

namespace textlab {

struct LdaConfig {
  size_t n_topics = 8;
  double alpha = 0.0;  // 0 -> 1/K
  double beta = 0.0;   // 0 -> 1/K
  size_t sweeps = 1000;
  size_t burn_in = 800;
  uint64_t seed = 0;

  double alpha_eff() const { return alpha > 0.0 ? alpha : 1.0 / double(n_topics); }
  double beta_eff() const { return beta > 0.0 ? beta : 1.0 / double(n_topics); }
  void validate() const;  // throws Error(config)
};

// Collapsed Gibbs state. Documents are visited in doc_index order and each
// (sweep, doc) pair gets its own derived RNG stream, so the trajectory does
// not depend on the storage order of the input docs.
struct GibbsState {
  LdaConfig config;
  size_t vocab_size = 0;
  std::vector<size_t> doc_index;                 // per doc, original corpus index
  std::vector<std::vector<size_t>> tokens;       // per doc, vocab column ids
  std::vector<std::vector<size_t>> assignments;  // per doc, topic per token
  std::vector<std::vector<size_t>> n_dk;         // doc x topic counts
  std::vector<std::vector<size_t>> n_kw;         // topic x term counts
  std::vector<size_t> n_k;                       // per-topic totals
  size_t oov_dropped = 0;
  size_t sweeps_done = 0;

  size_t n_docs() const { return tokens.size(); }
  size_t total_tokens() const;
  bool counts_consistent() const;  // exact integer identities
};

struct TopicModel {
  std::vector<std::vector<double>> phi;    // K x V, rows sum to 1
  std::vector<std::vector<double>> theta;  // N x K, rows sum to 1
  GibbsState final_state;                  // counts snapshot from last sweep
  LdaConfig config;

  size_t n_topics() const { return phi.size(); }
  size_t vocab_size() const { return phi.empty() ? 0 : phi[0].size(); }
};

// Seeded uniform topic per token position; OOV tokens dropped and counted.
GibbsState lda_initialize(const std::vector<TokenizedDoc>& docs,
                          const Vocabulary& vocab, const LdaConfig& config);

// One full resampling pass from p(z=k|rest) with the current token excluded
// from all counts. Preserves the count identities exactly.
void gibbs_sweep(GibbsState& state);

// sweeps passes; phi/theta are smoothed posterior means averaged over every
// sweep after burn_in.
TopicModel lda_fit(const std::vector<TokenizedDoc>& docs,
                   const Vocabulary& vocab, const LdaConfig& config);

// Per topic, m terms by descending phi, ties lexicographic. m clamped to V
// with a warning.
std::vector<std::vector<std::pair<std::string, double>>> lda_top_terms(
    const TopicModel& model, const Vocabulary& vocab, size_t m = 20);

// Collapsed joint log-likelihood: Dirichlet-multinomial terms for both the
// topic-term and doc-topic sides.
double lda_log_likelihood(const GibbsState& state);

// Topic file: "LDA v1 <K> <V>" header, one phi row per line as col:prob.
std::string topic_model_to_text(const TopicModel& m);
void save_topic_model(const TopicModel& m, const std::string& path);
// Top-terms file: "topic\trank\tterm\tprob" lines.
std::string top_terms_to_text(
    const std::vector<std::vector<std::pair<std::string, double>>>& tt);

}  // namespace textlab
