#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace textlab {

enum class Source { reddit, twitter };

std::string source_name(Source s);
Source source_from_name(std::string_view name);  // throws Error(data)

// One social-media post. title/body are never null-like: a missing or null
// field is stored as "". text is derived: trimmed "title body" with the
// separator dropped when either part is empty.
struct Document {
  std::string id;        // platform-unique
  Source source = Source::reddit;
  std::string category;  // subreddit name or hashtag
  std::string title;
  std::string body;
  std::string text;

  static std::string derive_text(const std::string& title,
                                 const std::string& body);

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  // Distinct category values in first-appearance order.
  std::vector<std::string> categories;
  // Seed of the last shuffle; meaningless while shuffled == false.
  uint64_t seed = 0;
  bool shuffled = false;

  size_t category_index(std::string_view category) const;  // throws Error(data)
  void rebuild_categories();
};

// Maps logical Document fields onto JSON keys; nested paths use dots
// ("data.title"). title/body paths may be empty (field left "").
struct FieldMap {
  std::string id_path = "id";
  std::string category_path = "category";
  std::string title_path;
  std::string body_path;
};

struct ParsedLines {
  std::vector<Document> documents;
  size_t skipped = 0;  // malformed lines
};

// One JSON object per line, UTF-8. Missing/null title or body become "".
// Lines that fail to parse or lack id/category are counted in skipped.
// Throws Error(io) on an unreadable stream, Error(data) if no line parses.
ParsedLines parse_jsonl(std::istream& in, Source source, const FieldMap& map);
ParsedLines parse_jsonl_file(const std::string& path, Source source,
                             const FieldMap& map);

// Concatenates parts in order; duplicate (source, id) keeps the first
// occurrence; categories rebuilt. Throws Error(data) when everything is empty.
Corpus merge_corpora(const std::vector<std::vector<Document>>& parts);

// Deterministic Fisher-Yates permutation using the repo PRNG.
Corpus shuffle(const Corpus& corpus, uint64_t seed);

enum class Sentiment { negative, neutral, positive };
std::string sentiment_name(Sentiment s);
Sentiment sentiment_from_name(std::string_view name);  // throws Error(data)

struct SyntheticCategory {
  std::string name;
  Source source = Source::reddit;
};

// Desk-scale stand-in for a scraped corpus: every document draws its tokens
// from exactly one sentiment vocabulary, mixed with noise terms.
struct SyntheticSpec {
  size_t n_docs_per_category = 100;
  std::vector<SyntheticCategory> categories;
  std::vector<std::string> negative_vocab;
  std::vector<std::string> neutral_vocab;
  std::vector<std::string> positive_vocab;
  size_t doc_length_min = 8;
  size_t doc_length_max = 30;
  std::vector<std::string> noise_vocab;
  double noise_fraction = 0.0;  // in [0,1)
  uint64_t seed = 0;

  void validate() const;  // throws Error(config) on disjointness violations
};

struct SyntheticCorpus {
  Corpus corpus;
  std::vector<Sentiment> planted_labels;  // parallel to corpus.documents
};

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

// Canonical corpus JSONL: exactly the keys id, source, category, title, body.
std::string corpus_to_jsonl(const Corpus& corpus);
Corpus corpus_from_jsonl(std::istream& in);
void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

}  // namespace textlab
