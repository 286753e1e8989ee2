#include "textlab/preprocess.hpp"

#include <unordered_map>

#include "textlab/error.hpp"
#include "textlab/parallel.hpp"
#include "textlab/porter.hpp"
#include "textlab/text_io.hpp"

namespace textlab {

std::string normalize_text(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (unsigned char c : raw) {
    if (c > 0x7F) continue;  // non-ASCII byte (UTF-8 continuation or lead)
    char mapped;
    if (c >= 'a' && c <= 'z') {
      mapped = static_cast<char>(c);
    } else if (c >= 'A' && c <= 'Z') {
      mapped = static_cast<char>(c - 'A' + 'a');
    } else if (c >= '0' && c <= '9') {
      mapped = static_cast<char>(c);
    } else {
      // punctuation, control bytes and whitespace all separate tokens
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    out.push_back(mapped);
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view normalized) {
  std::vector<std::string> tokens;
  for (std::string_view part : split_ws(normalized))
    tokens.emplace_back(part);
  return tokens;
}

namespace {

// The classic 179-word English stopword list.
constexpr const char* kStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you",
    "you're", "you've", "you'll", "you'd", "your", "yours", "yourself",
    "yourselves", "he", "him", "his", "himself", "she", "she's", "her",
    "hers", "herself", "it", "it's", "its", "itself", "they", "them",
    "their", "theirs", "themselves", "what", "which", "who", "whom", "this",
    "that", "that'll", "these", "those", "am", "is", "are", "was", "were",
    "be", "been", "being", "have", "has", "had", "having", "do", "does",
    "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because",
    "as", "until", "while", "of", "at", "by", "for", "with", "about",
    "against", "between", "into", "through", "during", "before", "after",
    "above", "below", "to", "from", "up", "down", "in", "out", "on", "off",
    "over", "under", "again", "further", "then", "once", "here", "there",
    "when", "where", "why", "how", "all", "any", "both", "each", "few",
    "more", "most", "other", "some", "such", "no", "nor", "not", "only",
    "own", "same", "so", "than", "too", "very", "s", "t", "can", "will",
    "just", "don", "don't", "should", "should've", "now", "d", "ll", "m",
    "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't",
    "didn", "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn",
    "hasn't", "haven", "haven't", "isn", "isn't", "ma", "mightn",
    "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't",
    "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't", "won",
    "won't", "wouldn", "wouldn't"};

}  // namespace

StopwordList load_stopwords(const std::string& path, std::string tag) {
  std::string content = read_file(path);
  StopwordList list;
  list.source_tag = tag.empty() ? path : std::move(tag);
  size_t line_no = 0;
  for (std::string_view raw : split(content, '\n')) {
    ++line_no;
    std::string_view word = trim(raw);
    if (word.empty() || word[0] == '#') continue;
    for (char c : word) {
      if (c >= 'A' && c <= 'Z')
        throw_config("stopword file " + path + " line " +
                     std::to_string(line_no) + ": entries must be lowercase");
    }
    if (!list.words.insert(std::string(word)).second)
      throw_config("stopword file " + path + " line " +
                   std::to_string(line_no) + ": duplicate entry '" +
                   std::string(word) + "'");
  }
  return list;
}

const StopwordList& builtin_stopwords() {
  static const StopwordList list = [] {
    StopwordList l;
    l.source_tag = "classic-english-179";
    for (const char* w : kStopwords) l.words.insert(w);
    return l;
  }();
  return list;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const StopwordList& list) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens)
    if (!list.contains(t)) out.push_back(t);
  return out;
}

PreprocessResult preprocess_corpus(const Corpus& corpus,
                                   const PreprocessOptions& opts) {
  if (corpus.documents.empty()) throw_data("preprocess: empty corpus");
  const StopwordList& stop =
      opts.stopwords ? *opts.stopwords : builtin_stopwords();

  std::vector<std::vector<std::string>> token_lists(corpus.documents.size());
  parallel_for(0, corpus.documents.size(), [&](size_t i) {
    auto tokens = tokenize(normalize_text(corpus.documents[i].text));
    tokens = remove_stopwords(tokens, stop);
    std::vector<std::string> stemmed;
    stemmed.reserve(tokens.size());
    for (const auto& t : tokens) {
      if (t.size() < opts.min_token_length) continue;
      stemmed.push_back(porter_stem(t));
    }
    token_lists[i] = std::move(stemmed);
  });

  PreprocessResult result;
  std::unordered_map<std::string, size_t> seen;  // joined tokens -> first index
  for (size_t i = 0; i < token_lists.size(); ++i) {
    if (token_lists[i].empty()) {
      result.dropped_empty.push_back(i);
      continue;
    }
    std::string key;
    for (const auto& t : token_lists[i]) {
      key += t;
      key.push_back(' ');
    }
    if (!seen.emplace(key, i).second) {
      result.dropped_duplicate.push_back(i);
      continue;
    }
    result.docs.push_back(TokenizedDoc{i, std::move(token_lists[i])});
  }
  if (result.docs.empty())
    throw_data("preprocess: every document reduced to zero tokens");
  return result;
}

std::string tokenized_to_text(const std::vector<TokenizedDoc>& docs) {
  std::string out;
  for (const auto& d : docs) {
    out += std::to_string(d.doc_index);
    out.push_back('\t');
    for (size_t i = 0; i < d.tokens.size(); ++i) {
      if (i) out.push_back(' ');
      out += d.tokens[i];
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<TokenizedDoc> tokenized_from_text(std::string_view text) {
  std::vector<TokenizedDoc> docs;
  size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto parts = split(line, '\t');
    if (parts.size() != 2)
      throw_data("tokenized corpus line " + std::to_string(line_no) +
                 ": expected '<doc_index>\\t<tokens>'");
    TokenizedDoc d;
    d.doc_index = parse_uint(parts[0]);
    for (std::string_view tok : split_ws(parts[1])) d.tokens.emplace_back(tok);
    docs.push_back(std::move(d));
  }
  if (docs.empty()) throw_data("tokenized corpus file is empty");
  return docs;
}

void save_tokenized(const std::vector<TokenizedDoc>& docs,
                    const std::string& path) {
  write_file(path, tokenized_to_text(docs));
}

std::vector<TokenizedDoc> load_tokenized(const std::string& path) {
  return tokenized_from_text(read_file(path));
}

}  // namespace textlab
