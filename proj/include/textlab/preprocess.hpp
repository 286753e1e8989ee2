#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "textlab/corpus.hpp"

namespace textlab {

// ASCII-only normalization: lowercase, every codepoint outside printable
// ASCII deleted, remaining non-alphanumeric ASCII mapped to space, whitespace
// runs collapsed, ends trimmed. Output alphabet is [a-z0-9 ].
std::string normalize_text(std::string_view raw);

// Split an already-normalized string on spaces. No empty tokens.
std::vector<std::string> tokenize(std::string_view normalized);

struct StopwordList {
  std::unordered_set<std::string> words;
  std::string source_tag;

  bool contains(std::string_view token) const {
    return words.count(std::string(token)) > 0;
  }
};

// One lowercase word per line, '#' comments allowed. Duplicate or
// non-lowercase entries are config errors.
StopwordList load_stopwords(const std::string& path, std::string tag = "");
// The 179-word classic English list compiled into the binary; used when no
// stopword file is configured.
const StopwordList& builtin_stopwords();

// Order-preserving filter; matches unstemmed tokens.
std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordList& list);

struct TokenizedDoc {
  size_t doc_index = 0;  // index into the corpus this was built from
  std::vector<std::string> tokens;

  bool operator==(const TokenizedDoc&) const = default;
};

struct PreprocessOptions {
  const StopwordList* stopwords = nullptr;  // nullptr -> builtin list
  size_t min_token_length = 1;
};

struct PreprocessResult {
  std::vector<TokenizedDoc> docs;
  std::vector<size_t> dropped_empty;      // corpus indices that reduced to 0 tokens
  std::vector<size_t> dropped_duplicate;  // corpus indices deduped away
};

// normalize -> tokenize -> stopword filter -> Porter stem, per document, on
// Document.text. Exact-duplicate token lists keep the first occurrence;
// documents that end up empty are dropped and reported.
PreprocessResult preprocess_corpus(const Corpus& corpus,
                                   const PreprocessOptions& opts = {});

// Tokenized corpus file: one line per doc, "<doc_index>\t<tokens space-joined>".
std::string tokenized_to_text(const std::vector<TokenizedDoc>& docs);
std::vector<TokenizedDoc> tokenized_from_text(std::string_view text);
void save_tokenized(const std::vector<TokenizedDoc>& docs,
                    const std::string& path);
std::vector<TokenizedDoc> load_tokenized(const std::string& path);

}  // namespace textlab
