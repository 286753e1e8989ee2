#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "textlab/corpus.hpp"

namespace textlab {

// Cluster -> sentiment mapping plus ordered per-category override rules.
// The shipped default encodes the recorded analyst outcome: clusters 0/4/5
// negative, 1/6/7 neutral, 2/3 positive, BotchedSurgeries forced negative.
struct SentimentMapping {
  std::map<size_t, Sentiment> cluster_to_sentiment;
  std::vector<std::pair<std::string, Sentiment>> overrides;  // (category, label)

  // Every cluster id in [0,k) must be mapped; override categories must exist
  // in the corpus category list.
  void validate(size_t k, const Corpus& corpus) const;  // throws Error(config)
};

enum class LabelProvenance { mapping, override_rule };

struct LabeledSet {
  std::vector<Sentiment> labels;             // per doc
  std::vector<LabelProvenance> provenance;   // per doc
  // N x 3 one-hot rows in the fixed column order (negative, neutral, positive).
  std::vector<std::array<uint8_t, 3>> one_hot;
};

// doc_categories[i] is the category of the document behind assignments[i].
LabeledSet apply_mapping(const std::vector<size_t>& assignments,
                         const SentimentMapping& mapping,
                         const std::vector<std::string>& doc_categories);

std::vector<std::array<uint8_t, 3>> one_hot(const std::vector<Sentiment>& labels);

struct ClassBalance {
  std::array<size_t, 3> counts{};     // negative, neutral, positive
  std::array<double, 3> fractions{};  // sum to 1
  size_t n = 0;
};

ClassBalance class_balance(const std::vector<Sentiment>& labels);

// Supervised task targets: category index per document, in corpus category
// order (fixed at merge time).
std::vector<size_t> category_labels(const Corpus& corpus);

// Mapping file: [mapping] section with "<cluster id> = "<sentiment>"" keys
// and any number of [[override]] tables with category/sentiment keys.
SentimentMapping parse_mapping(const std::string& config_text);
SentimentMapping load_mapping(const std::string& path);
std::string mapping_to_text(const SentimentMapping& m);

// The recorded analyst mapping for k = 8.
SentimentMapping default_mapping();

// Labels file: "doc_index\tsentiment\tprovenance" lines.
std::string labels_to_text(const LabeledSet& set,
                           const std::vector<size_t>& doc_indices);
// Returns (doc_index, sentiment) pairs; provenance is re-read but unused.
std::vector<std::pair<size_t, Sentiment>> labels_from_text(std::string_view text);

}  // namespace textlab
