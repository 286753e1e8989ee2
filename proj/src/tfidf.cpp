#include "textlab/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "textlab/error.hpp"
#include "textlab/parallel.hpp"
#include "textlab/text_io.hpp"

namespace textlab {

double SparseMatrix::row_norm(size_t r) const {
  double s = 0.0;
  for (const auto& e : rows[r]) s += e.weight * e.weight;
  return std::sqrt(s);
}

std::vector<size_t> SparseMatrix::empty_rows() const {
  std::vector<size_t> out;
  for (size_t r = 0; r < rows.size(); ++r)
    if (rows[r].empty()) out.push_back(r);
  return out;
}

std::vector<double> SparseMatrix::row_dense(size_t r) const {
  std::vector<double> out(n_cols, 0.0);
  for (const auto& e : rows[r]) out[e.col] = e.weight;
  return out;
}

Vocabulary build_vocabulary(const std::vector<TokenizedDoc>& docs,
                            size_t min_df, double max_df_fraction) {
  if (docs.empty()) throw_data("build_vocabulary: no documents");

  std::map<std::string, size_t> df;  // ordered -> terms come out sorted
  for (const auto& d : docs) {
    std::vector<std::string> uniq(d.tokens.begin(), d.tokens.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (auto& t : uniq) ++df[t];
  }

  const double max_df = max_df_fraction * static_cast<double>(docs.size());
  Vocabulary vocab;
  for (auto& [term, freq] : df) {
    if (freq < min_df) continue;
    if (static_cast<double>(freq) > max_df) continue;
    vocab.index.emplace(term, vocab.terms.size());
    vocab.terms.push_back(term);
    vocab.doc_freq.push_back(freq);
  }
  if (vocab.terms.empty())
    throw_data("build_vocabulary: empty vocabulary after df bounds (min_df=" +
               std::to_string(min_df) +
               ", max_df_fraction=" + format_double(max_df_fraction) + ")");
  return vocab;
}

std::vector<double> idf(const Vocabulary& vocab, size_t n_docs) {
  std::vector<double> out(vocab.size());
  for (size_t t = 0; t < vocab.size(); ++t) {
    out[t] = std::log((1.0 + static_cast<double>(n_docs)) /
                      (1.0 + static_cast<double>(vocab.doc_freq[t]))) +
             1.0;
  }
  return out;
}

SparseMatrix vectorize(const std::vector<TokenizedDoc>& docs,
                       const Vocabulary& vocab) {
  SparseMatrix m;
  m.n_rows = docs.size();
  m.n_cols = vocab.size();
  m.rows.resize(docs.size());
  m.row_doc_index.resize(docs.size());

  const std::vector<double> idf_w = idf(vocab, docs.size());

  parallel_for(0, docs.size(), [&](size_t r) {
    m.row_doc_index[r] = docs[r].doc_index;
    std::map<size_t, size_t> counts;  // col -> tf, ordered by col
    for (const auto& tok : docs[r].tokens) {
      auto it = vocab.index.find(tok);
      if (it != vocab.index.end()) ++counts[it->second];
    }
    auto& row = m.rows[r];
    row.reserve(counts.size());
    double sq = 0.0;
    for (const auto& [col, tf] : counts) {
      double w = static_cast<double>(tf) * idf_w[col];
      sq += w * w;
      row.push_back({col, w});
    }
    if (sq > 0.0) {
      double inv = 1.0 / std::sqrt(sq);
      for (auto& e : row) e.weight *= inv;
    }
  });
  return m;
}

SparseMatrix sparse_from_dense(const std::vector<std::vector<double>>& rows) {
  SparseMatrix m;
  m.n_rows = rows.size();
  m.n_cols = rows.empty() ? 0 : rows[0].size();
  m.rows.resize(rows.size());
  m.row_doc_index.resize(rows.size());
  for (size_t r = 0; r < rows.size(); ++r) {
    m.row_doc_index[r] = r;
    for (size_t c = 0; c < rows[r].size(); ++c) {
      if (rows[r][c] != 0.0) m.rows[r].push_back({c, rows[r][c]});
    }
  }
  return m;
}

std::string matrix_to_text(const SparseMatrix& m) {
  std::string out = "TFIDF v1 " + std::to_string(m.n_rows) + " " +
                    std::to_string(m.n_cols) + "\n";
  for (size_t r = 0; r < m.n_rows; ++r) {
    out += std::to_string(m.row_doc_index[r]);
    for (const auto& e : m.rows[r]) {
      out.push_back(' ');
      out += std::to_string(e.col);
      out.push_back(':');
      out += format_double(e.weight);
    }
    out.push_back('\n');
  }
  return out;
}

SparseMatrix matrix_from_text(std::string_view text) {
  auto lines = split(text, '\n');
  if (lines.empty()) throw_data("matrix file: empty");
  auto header = split_ws(lines[0]);
  if (header.size() != 4 || header[0] != "TFIDF" || header[1] != "v1")
    throw_data("matrix file line 1: expected 'TFIDF v1 <n_rows> <n_cols>'");
  SparseMatrix m;
  m.n_rows = parse_uint(header[2]);
  m.n_cols = parse_uint(header[3]);

  size_t row = 0;
  for (size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    if (row >= m.n_rows)
      throw_data("matrix file line " + std::to_string(li + 1) +
                 ": more rows than the header announced");
    auto fields = split_ws(lines[li]);
    std::vector<SparseEntry> entries;
    size_t prev_col = 0;
    bool first = true;
    for (size_t f = 1; f < fields.size(); ++f) {
      auto kv = split(fields[f], ':');
      if (kv.size() != 2)
        throw_data("matrix file line " + std::to_string(li + 1) +
                   ": expected '<col>:<weight>'");
      SparseEntry e{parse_uint(kv[0]), parse_double(kv[1])};
      if (e.col >= m.n_cols)
        throw_data("matrix file line " + std::to_string(li + 1) +
                   ": column id " + std::to_string(e.col) + " out of range");
      if (!first && e.col <= prev_col)
        throw_data("matrix file line " + std::to_string(li + 1) +
                   ": column ids must be strictly increasing");
      prev_col = e.col;
      first = false;
      entries.push_back(e);
    }
    m.row_doc_index.push_back(parse_uint(fields[0]));
    m.rows.push_back(std::move(entries));
    ++row;
  }
  if (row != m.n_rows)
    throw_data("matrix file: header announced " + std::to_string(m.n_rows) +
               " rows, found " + std::to_string(row));
  return m;
}

void save_matrix(const SparseMatrix& m, const std::string& path) {
  write_file(path, matrix_to_text(m));
}

SparseMatrix load_matrix(const std::string& path) {
  return matrix_from_text(read_file(path));
}

std::string vocab_to_text(const Vocabulary& v) {
  std::string out;
  for (size_t t = 0; t < v.terms.size(); ++t) {
    out += v.terms[t];
    out.push_back('\t');
    out += std::to_string(v.doc_freq[t]);
    out.push_back('\n');
  }
  return out;
}

Vocabulary vocab_from_text(std::string_view text) {
  Vocabulary v;
  size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto parts = split(line, '\t');
    if (parts.size() != 2)
      throw_data("vocabulary file line " + std::to_string(line_no) +
                 ": expected 'term\\tdoc_freq'");
    std::string term(parts[0]);
    if (!v.terms.empty() && term <= v.terms.back())
      throw_data("vocabulary file line " + std::to_string(line_no) +
                 ": terms must be sorted and distinct");
    v.index.emplace(term, v.terms.size());
    v.terms.push_back(std::move(term));
    v.doc_freq.push_back(parse_uint(parts[1]));
  }
  if (v.terms.empty()) throw_data("vocabulary file is empty");
  return v;
}

void save_vocab(const Vocabulary& v, const std::string& path) {
  write_file(path, vocab_to_text(v));
}

Vocabulary load_vocab(const std::string& path) {
  return vocab_from_text(read_file(path));
}

}  // namespace textlab
