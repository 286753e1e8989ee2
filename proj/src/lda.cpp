#include "textlab/lda.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <unordered_map>

#include "textlab/error.hpp"
#include "textlab/rng.hpp"
#include "textlab/text_io.hpp"

namespace textlab {

void LdaConfig::validate() const {
  if (n_topics < 1) throw_config("lda: n_topics must be >= 1");
  if (alpha < 0.0 || beta < 0.0) throw_config("lda: priors must be positive");
  if (burn_in >= sweeps) throw_config("lda: burn_in must be < sweeps");
}

size_t GibbsState::total_tokens() const {
  size_t t = 0;
  for (const auto& d : tokens) t += d.size();
  return t;
}

bool GibbsState::counts_consistent() const {
  const size_t k_topics = config.n_topics;
  // sum_w n_kw == n_k
  for (size_t k = 0; k < k_topics; ++k) {
    size_t s = std::accumulate(n_kw[k].begin(), n_kw[k].end(), size_t{0});
    if (s != n_k[k]) return false;
  }
  // sum_k n_dk == len(doc)
  for (size_t d = 0; d < tokens.size(); ++d) {
    size_t s = std::accumulate(n_dk[d].begin(), n_dk[d].end(), size_t{0});
    if (s != tokens[d].size()) return false;
  }
  // recount n_kw from assignments
  std::vector<std::vector<size_t>> recount(k_topics,
                                           std::vector<size_t>(vocab_size, 0));
  for (size_t d = 0; d < tokens.size(); ++d)
    for (size_t i = 0; i < tokens[d].size(); ++i)
      ++recount[assignments[d][i]][tokens[d][i]];
  return recount == n_kw;
}

GibbsState lda_initialize(const std::vector<TokenizedDoc>& docs,
                          const Vocabulary& vocab, const LdaConfig& config) {
  config.validate();
  if (docs.empty()) throw_data("lda: no documents");

  GibbsState st;
  st.config = config;
  st.vocab_size = vocab.size();

  // Canonical order: ascending doc_index.
  std::vector<size_t> order(docs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return docs[a].doc_index < docs[b].doc_index;
  });

  const size_t K = config.n_topics;
  for (size_t oi : order) {
    const auto& doc = docs[oi];
    std::vector<size_t> cols;
    cols.reserve(doc.tokens.size());
    for (const auto& tok : doc.tokens) {
      auto it = vocab.index.find(tok);
      if (it == vocab.index.end()) {
        ++st.oov_dropped;
        continue;
      }
      cols.push_back(it->second);
    }
    st.doc_index.push_back(doc.doc_index);
    st.tokens.push_back(std::move(cols));
  }
  if (st.total_tokens() == 0)
    throw_data("lda: every token is out of vocabulary");

  st.n_dk.assign(st.n_docs(), std::vector<size_t>(K, 0));
  st.n_kw.assign(K, std::vector<size_t>(st.vocab_size, 0));
  st.n_k.assign(K, 0);
  st.assignments.resize(st.n_docs());

  for (size_t d = 0; d < st.n_docs(); ++d) {
    Rng rng(Rng::derive(config.seed, 0, st.doc_index[d]));
    auto& z = st.assignments[d];
    z.resize(st.tokens[d].size());
    for (size_t i = 0; i < st.tokens[d].size(); ++i) {
      size_t topic = K == 1 ? 0 : static_cast<size_t>(rng.uniform_int(K));
      z[i] = topic;
      ++st.n_dk[d][topic];
      ++st.n_kw[topic][st.tokens[d][i]];
      ++st.n_k[topic];
    }
  }
  return st;
}

void gibbs_sweep(GibbsState& state) {
  const size_t K = state.config.n_topics;
  const double alpha = state.config.alpha_eff();
  const double beta = state.config.beta_eff();
  const double v_beta = beta * static_cast<double>(state.vocab_size);
  const size_t sweep_id = ++state.sweeps_done;

  std::vector<double> weight(K);
  for (size_t d = 0; d < state.n_docs(); ++d) {
    Rng rng(Rng::derive(state.config.seed, sweep_id, state.doc_index[d]));
    auto& doc_tokens = state.tokens[d];
    auto& z = state.assignments[d];
    auto& dk = state.n_dk[d];
    for (size_t i = 0; i < doc_tokens.size(); ++i) {
      const size_t w = doc_tokens[i];
      const size_t old_k = z[i];
      --dk[old_k];
      --state.n_kw[old_k][w];
      --state.n_k[old_k];

      double total = 0.0;
      for (size_t k = 0; k < K; ++k) {
        double wk = (static_cast<double>(dk[k]) + alpha) *
                    (static_cast<double>(state.n_kw[k][w]) + beta) /
                    (static_cast<double>(state.n_k[k]) + v_beta);
        weight[k] = wk;
        total += wk;
      }
      double target = rng.uniform() * total;
      size_t new_k = K - 1;
      double cum = 0.0;
      for (size_t k = 0; k < K; ++k) {
        cum += weight[k];
        if (cum > target) {
          new_k = k;
          break;
        }
      }
      z[i] = new_k;
      ++dk[new_k];
      ++state.n_kw[new_k][w];
      ++state.n_k[new_k];
    }
  }
}

TopicModel lda_fit(const std::vector<TokenizedDoc>& docs,
                   const Vocabulary& vocab, const LdaConfig& config) {
  GibbsState st = lda_initialize(docs, vocab, config);
  const size_t K = config.n_topics;
  const size_t V = st.vocab_size;
  const size_t N = st.n_docs();
  const double alpha = config.alpha_eff();
  const double beta = config.beta_eff();

  std::vector<std::vector<double>> phi_acc(K, std::vector<double>(V, 0.0));
  std::vector<std::vector<double>> theta_acc(N, std::vector<double>(K, 0.0));
  size_t samples = 0;

  for (size_t s = 0; s < config.sweeps; ++s) {
    gibbs_sweep(st);
    if (s < config.burn_in) continue;
    ++samples;
    for (size_t k = 0; k < K; ++k) {
      const double denom = static_cast<double>(st.n_k[k]) +
                           beta * static_cast<double>(V);
      for (size_t w = 0; w < V; ++w)
        phi_acc[k][w] += (static_cast<double>(st.n_kw[k][w]) + beta) / denom;
    }
    for (size_t d = 0; d < N; ++d) {
      const double denom = static_cast<double>(st.tokens[d].size()) +
                           alpha * static_cast<double>(K);
      for (size_t k = 0; k < K; ++k)
        theta_acc[d][k] += (static_cast<double>(st.n_dk[d][k]) + alpha) / denom;
    }
  }

  TopicModel model;
  model.config = config;
  const double inv = 1.0 / static_cast<double>(samples);
  for (auto& row : phi_acc)
    for (auto& x : row) x *= inv;
  for (auto& row : theta_acc)
    for (auto& x : row) x *= inv;
  model.phi = std::move(phi_acc);

  // the state visits docs in canonical doc_index order; hand theta back in
  // the caller's storage order
  std::unordered_map<size_t, size_t> state_row;
  for (size_t d = 0; d < st.doc_index.size(); ++d)
    state_row.emplace(st.doc_index[d], d);
  model.theta.resize(docs.size());
  for (size_t i = 0; i < docs.size(); ++i)
    model.theta[i] = theta_acc[state_row.at(docs[i].doc_index)];
  model.final_state = std::move(st);
  return model;
}

std::vector<std::vector<std::pair<std::string, double>>> lda_top_terms(
    const TopicModel& model, const Vocabulary& vocab, size_t m) {
  if (m > vocab.size()) {
    std::cerr << "warning: lda_top_terms m=" << m
              << " clamped to vocabulary size " << vocab.size() << "\n";
    m = vocab.size();
  }
  std::vector<std::vector<std::pair<std::string, double>>> out;
  for (const auto& row : model.phi) {
    std::vector<size_t> order(vocab.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      if (row[a] != row[b]) return row[a] > row[b];
      return vocab.terms[a] < vocab.terms[b];
    });
    std::vector<std::pair<std::string, double>> terms;
    terms.reserve(m);
    for (size_t i = 0; i < m; ++i)
      terms.emplace_back(vocab.terms[order[i]], row[order[i]]);
    out.push_back(std::move(terms));
  }
  return out;
}

double lda_log_likelihood(const GibbsState& st) {
  const size_t K = st.config.n_topics;
  const double alpha = st.config.alpha_eff();
  const double beta = st.config.beta_eff();
  const double V = static_cast<double>(st.vocab_size);

  double ll = 0.0;
  // word side: prod_k DirMult(n_kw | beta)
  for (size_t k = 0; k < K; ++k) {
    ll += std::lgamma(V * beta) - std::lgamma(V * beta + double(st.n_k[k]));
    for (size_t w = 0; w < st.vocab_size; ++w) {
      if (st.n_kw[k][w] > 0)
        ll += std::lgamma(double(st.n_kw[k][w]) + beta) - std::lgamma(beta);
    }
  }
  // topic side: prod_d DirMult(n_dk | alpha)
  const double k_alpha = double(K) * alpha;
  for (size_t d = 0; d < st.n_docs(); ++d) {
    ll += std::lgamma(k_alpha) -
          std::lgamma(k_alpha + double(st.tokens[d].size()));
    for (size_t k = 0; k < K; ++k) {
      if (st.n_dk[d][k] > 0)
        ll += std::lgamma(double(st.n_dk[d][k]) + alpha) - std::lgamma(alpha);
    }
  }
  return ll;
}

std::string topic_model_to_text(const TopicModel& m) {
  std::string out = "LDA v1 " + std::to_string(m.n_topics()) + " " +
                    std::to_string(m.vocab_size()) + "\n";
  for (const auto& row : m.phi) {
    for (size_t w = 0; w < row.size(); ++w) {
      if (w) out.push_back(' ');
      out += std::to_string(w);
      out.push_back(':');
      out += format_double(row[w]);
    }
    out.push_back('\n');
  }
  return out;
}

void save_topic_model(const TopicModel& m, const std::string& path) {
  write_file(path, topic_model_to_text(m));
}

std::string top_terms_to_text(
    const std::vector<std::vector<std::pair<std::string, double>>>& tt) {
  std::string out;
  for (size_t topic = 0; topic < tt.size(); ++topic) {
    for (size_t rank = 0; rank < tt[topic].size(); ++rank) {
      out += std::to_string(topic);
      out.push_back('\t');
      out += std::to_string(rank + 1);
      out.push_back('\t');
      out += tt[topic][rank].first;
      out.push_back('\t');
      out += format_double(tt[topic][rank].second);
      out.push_back('\n');
    }
  }
  return out;
}

}  // namespace textlab
