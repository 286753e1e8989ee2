#include "textlab/labeling.hpp"

#include <algorithm>

#include "textlab/config.hpp"
#include "textlab/error.hpp"
#include "textlab/text_io.hpp"

namespace textlab {

void SentimentMapping::validate(size_t k, const Corpus& corpus) const {
  for (size_t c = 0; c < k; ++c) {
    if (!cluster_to_sentiment.count(c))
      throw_config("sentiment mapping: cluster " + std::to_string(c) +
                   " is unmapped");
  }
  for (const auto& [cluster, _] : cluster_to_sentiment) {
    if (cluster >= k)
      throw_config("sentiment mapping: cluster id " + std::to_string(cluster) +
                   " out of range for k=" + std::to_string(k));
  }
  for (const auto& [category, _] : overrides) {
    if (std::find(corpus.categories.begin(), corpus.categories.end(),
                  category) == corpus.categories.end())
      throw_config("sentiment mapping: override category '" + category +
                   "' not present in the corpus");
  }
}

LabeledSet apply_mapping(const std::vector<size_t>& assignments,
                         const SentimentMapping& mapping,
                         const std::vector<std::string>& doc_categories) {
  if (assignments.size() != doc_categories.size())
    throw_data("apply_mapping: assignments/categories size mismatch");

  LabeledSet set;
  set.labels.reserve(assignments.size());
  set.provenance.reserve(assignments.size());
  for (size_t i = 0; i < assignments.size(); ++i) {
    auto it = mapping.cluster_to_sentiment.find(assignments[i]);
    if (it == mapping.cluster_to_sentiment.end())
      throw_config("apply_mapping: cluster " + std::to_string(assignments[i]) +
                   " has no sentiment mapping");
    Sentiment label = it->second;
    LabelProvenance prov = LabelProvenance::mapping;
    for (const auto& [category, forced] : mapping.overrides) {
      if (doc_categories[i] == category) {
        label = forced;  // later rules win
        prov = LabelProvenance::override_rule;
      }
    }
    set.labels.push_back(label);
    set.provenance.push_back(prov);
  }
  set.one_hot = one_hot(set.labels);
  return set;
}

std::vector<std::array<uint8_t, 3>> one_hot(const std::vector<Sentiment>& labels) {
  std::vector<std::array<uint8_t, 3>> out(labels.size(), {0, 0, 0});
  for (size_t i = 0; i < labels.size(); ++i)
    out[i][static_cast<size_t>(labels[i])] = 1;
  return out;
}

ClassBalance class_balance(const std::vector<Sentiment>& labels) {
  if (labels.empty()) throw_data("class_balance: no labels");
  ClassBalance b;
  b.n = labels.size();
  for (Sentiment s : labels) ++b.counts[static_cast<size_t>(s)];
  for (size_t c = 0; c < 3; ++c)
    b.fractions[c] = static_cast<double>(b.counts[c]) / static_cast<double>(b.n);
  return b;
}

std::vector<size_t> category_labels(const Corpus& corpus) {
  std::vector<size_t> out;
  out.reserve(corpus.documents.size());
  for (const auto& d : corpus.documents)
    out.push_back(corpus.category_index(d.category));
  return out;
}

SentimentMapping parse_mapping(const std::string& config_text) {
  ConfigDoc doc = parse_config(config_text);
  SentimentMapping m;
  const ConfigTable& table = doc.require_section("mapping");
  for (const auto& [key, value] : table.entries) {
    size_t cluster = 0;
    try {
      cluster = static_cast<size_t>(parse_uint(key));
    } catch (const Error&) {
      throw_config("[mapping] keys must be cluster ids, got '" + key + "'");
    }
    m.cluster_to_sentiment[cluster] =
        sentiment_from_name(value.as_string(table.loc(key)));
  }
  if (m.cluster_to_sentiment.empty())
    throw_config("[mapping] section maps no clusters");
  for (const ConfigTable* o : doc.array_sections("override")) {
    m.overrides.emplace_back(o->require_string("category"),
                             sentiment_from_name(o->require_string("sentiment")));
  }
  return m;
}

SentimentMapping load_mapping(const std::string& path) {
  return parse_mapping(read_file(path));
}

std::string mapping_to_text(const SentimentMapping& m) {
  std::string out = "[mapping]\n";
  for (const auto& [cluster, sentiment] : m.cluster_to_sentiment) {
    out += std::to_string(cluster);
    out += " = \"";
    out += sentiment_name(sentiment);
    out += "\"\n";
  }
  for (const auto& [category, sentiment] : m.overrides) {
    out += "\n[[override]]\ncategory = \"" + category + "\"\nsentiment = \"" +
           sentiment_name(sentiment) + "\"\n";
  }
  return out;
}

SentimentMapping default_mapping() {
  SentimentMapping m;
  m.cluster_to_sentiment = {
      {0, Sentiment::negative}, {1, Sentiment::neutral},
      {2, Sentiment::positive}, {3, Sentiment::positive},
      {4, Sentiment::negative}, {5, Sentiment::negative},
      {6, Sentiment::neutral},  {7, Sentiment::neutral},
  };
  m.overrides.emplace_back("BotchedSurgeries", Sentiment::negative);
  return m;
}

std::string labels_to_text(const LabeledSet& set,
                           const std::vector<size_t>& doc_indices) {
  if (doc_indices.size() != set.labels.size())
    throw_data("labels_to_text: doc index count mismatch");
  std::string out;
  for (size_t i = 0; i < set.labels.size(); ++i) {
    out += std::to_string(doc_indices[i]);
    out.push_back('\t');
    out += sentiment_name(set.labels[i]);
    out.push_back('\t');
    out += set.provenance[i] == LabelProvenance::override_rule ? "override"
                                                               : "mapping";
    out.push_back('\n');
  }
  return out;
}

std::vector<std::pair<size_t, Sentiment>> labels_from_text(
    std::string_view text) {
  std::vector<std::pair<size_t, Sentiment>> out;
  size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto parts = split(line, '\t');
    if (parts.size() < 2)
      throw_data("labels file line " + std::to_string(line_no) +
                 ": expected 'doc_index\\tsentiment[\\tprovenance]'");
    out.emplace_back(parse_uint(parts[0]), sentiment_from_name(parts[1]));
  }
  if (out.empty()) throw_data("labels file is empty");
  return out;
}

}  // namespace textlab
