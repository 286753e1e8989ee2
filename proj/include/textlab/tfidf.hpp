#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "textlab/preprocess.hpp"

namespace textlab {

// Unigram vocabulary, lexicographically sorted so column ids do not depend
// on corpus order.
struct Vocabulary {
  std::vector<std::string> terms;                  // sorted ascending
  std::unordered_map<std::string, size_t> index;   // term -> column
  std::vector<size_t> doc_freq;                    // docs containing term

  size_t size() const { return terms.size(); }
  bool operator==(const Vocabulary& o) const {
    return terms == o.terms && doc_freq == o.doc_freq;
  }
};

struct SparseEntry {
  size_t col;
  double weight;
  bool operator==(const SparseEntry&) const = default;
};

// Row-major sparse matrix; every non-empty row of a TF-IDF build has unit
// Euclidean norm and strictly increasing column ids.
struct SparseMatrix {
  size_t n_rows = 0;
  size_t n_cols = 0;
  std::vector<std::vector<SparseEntry>> rows;
  std::vector<size_t> row_doc_index;  // row -> original corpus doc_index

  bool operator==(const SparseMatrix&) const = default;

  double row_norm(size_t r) const;
  // Rows with no entries (all tokens were out-of-vocabulary).
  std::vector<size_t> empty_rows() const;
  std::vector<double> row_dense(size_t r) const;
};

// Terms with doc_freq < min_df or doc_freq > max_df_fraction * N are
// excluded. Defaults keep everything. Errors when nothing survives.
Vocabulary build_vocabulary(const std::vector<TokenizedDoc>& docs,
                            size_t min_df = 1, double max_df_fraction = 1.0);

// Smoothed idf: ln((1 + n_docs) / (1 + df)) + 1. Equals 1 when df == n_docs.
std::vector<double> idf(const Vocabulary& vocab, size_t n_docs);

// Raw term counts scaled by idf, then L2 row normalization. Out-of-vocabulary
// tokens are ignored; rows with no in-vocabulary tokens come out empty.
SparseMatrix vectorize(const std::vector<TokenizedDoc>& docs,
                       const Vocabulary& vocab);

// Wrap dense rows (e.g. a 2-D embedding) in the sparse container so the
// clustering code has one input type.
SparseMatrix sparse_from_dense(const std::vector<std::vector<double>>& rows);

// Matrix file: "TFIDF v1 <n_rows> <n_cols>" header, then per row
// "<doc_index> <col>:<weight> ...", weights as shortest round-trip decimals.
std::string matrix_to_text(const SparseMatrix& m);
SparseMatrix matrix_from_text(std::string_view text);
void save_matrix(const SparseMatrix& m, const std::string& path);
SparseMatrix load_matrix(const std::string& path);

// Vocabulary file: "term\tdoc_freq" per line, sorted.
std::string vocab_to_text(const Vocabulary& v);
Vocabulary vocab_from_text(std::string_view text);
void save_vocab(const Vocabulary& v, const std::string& path);
Vocabulary load_vocab(const std::string& path);

}  // namespace textlab
