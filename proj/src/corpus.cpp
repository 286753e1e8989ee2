#include "textlab/corpus.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "textlab/error.hpp"
#include "textlab/rng.hpp"
#include "textlab/text_io.hpp"

namespace textlab {

using nlohmann::json;

std::string source_name(Source s) {
  return s == Source::reddit ? "reddit" : "twitter";
}

Source source_from_name(std::string_view name) {
  if (name == "reddit") return Source::reddit;
  if (name == "twitter") return Source::twitter;
  throw_data("unknown source '" + std::string(name) + "'");
}

std::string Document::derive_text(const std::string& title,
                                  const std::string& body) {
  std::string t(trim(title));
  std::string b(trim(body));
  if (t.empty()) return b;
  if (b.empty()) return t;
  return t + " " + b;
}

size_t Corpus::category_index(std::string_view category) const {
  for (size_t i = 0; i < categories.size(); ++i)
    if (categories[i] == category) return i;
  throw_data("category '" + std::string(category) + "' not in corpus");
}

void Corpus::rebuild_categories() {
  categories.clear();
  std::unordered_set<std::string> seen;
  for (const auto& d : documents) {
    if (seen.insert(d.category).second) categories.push_back(d.category);
  }
}

namespace {

// Dotted-path lookup into a JSON object; nullptr when absent.
const json* lookup(const json& obj, std::string_view path) {
  const json* cur = &obj;
  for (std::string_view part : split(path, '.')) {
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(std::string(part));
    if (it == cur->end()) return nullptr;
    cur = &*it;
  }
  return cur;
}

// Null and missing both collapse to "". Numbers/bools are stringified so that
// numeric ids survive.
std::string string_at(const json& obj, std::string_view path) {
  if (path.empty()) return "";
  const json* v = lookup(obj, path);
  if (!v || v->is_null()) return "";
  if (v->is_string()) return v->get<std::string>();
  if (v->is_number_integer()) return std::to_string(v->get<int64_t>());
  if (v->is_number_unsigned()) return std::to_string(v->get<uint64_t>());
  if (v->is_boolean()) return v->get<bool>() ? "true" : "false";
  if (v->is_number_float()) return format_double(v->get<double>());
  return "";
}

}  // namespace

ParsedLines parse_jsonl(std::istream& in, Source source, const FieldMap& map) {
  if (!in) throw_io("unreadable input stream");
  ParsedLines out;
  std::string line;
  size_t total_lines = 0;
  while (std::getline(in, line)) {
    if (in.bad()) throw_io("read failure while parsing JSONL");
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    ++total_lines;
    json obj = json::parse(sv, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      ++out.skipped;
      continue;
    }
    Document d;
    d.id = string_at(obj, map.id_path);
    d.category = string_at(obj, map.category_path);
    if (d.id.empty() || d.category.empty()) {
      ++out.skipped;
      continue;
    }
    d.source = source;
    d.title = string_at(obj, map.title_path);
    d.body = string_at(obj, map.body_path);
    d.text = Document::derive_text(d.title, d.body);
    out.documents.push_back(std::move(d));
  }
  if (in.bad()) throw_io("read failure while parsing JSONL");
  if (out.documents.empty())
    throw_data("no well-formed JSONL lines (saw " +
               std::to_string(total_lines) + " lines, skipped " +
               std::to_string(out.skipped) + ")");
  return out;
}

ParsedLines parse_jsonl_file(const std::string& path, Source source,
                             const FieldMap& map) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open JSONL file: " + path);
  return parse_jsonl(in, source, map);
}

Corpus merge_corpora(const std::vector<std::vector<Document>>& parts) {
  Corpus corpus;
  std::set<std::pair<Source, std::string>> seen;
  for (const auto& part : parts) {
    for (const auto& d : part) {
      if (seen.emplace(d.source, d.id).second) corpus.documents.push_back(d);
    }
  }
  if (corpus.documents.empty()) throw_data("merge_corpora: all parts empty");
  corpus.rebuild_categories();
  return corpus;
}

Corpus shuffle(const Corpus& corpus, uint64_t seed) {
  if (corpus.documents.empty()) throw_data("shuffle: empty corpus");
  Corpus out = corpus;
  Rng rng(seed);
  rng.shuffle(out.documents);
  out.seed = seed;
  out.shuffled = true;
  return out;
}

std::string sentiment_name(Sentiment s) {
  switch (s) {
    case Sentiment::negative: return "negative";
    case Sentiment::neutral: return "neutral";
    default: return "positive";
  }
}

Sentiment sentiment_from_name(std::string_view name) {
  if (name == "negative") return Sentiment::negative;
  if (name == "neutral") return Sentiment::neutral;
  if (name == "positive") return Sentiment::positive;
  throw_data("unknown sentiment '" + std::string(name) + "'");
}

void SyntheticSpec::validate() const {
  if (n_docs_per_category == 0)
    throw_config("synthetic spec: n_docs_per_category must be positive");
  if (categories.empty()) throw_config("synthetic spec: no categories");
  if (negative_vocab.empty() || neutral_vocab.empty() || positive_vocab.empty())
    throw_config("synthetic spec: all three sentiment vocabularies required");
  if (doc_length_min == 0 || doc_length_max < doc_length_min)
    throw_config("synthetic spec: bad doc_length range");
  if (noise_fraction < 0.0 || noise_fraction >= 1.0)
    throw_config("synthetic spec: noise_fraction must be in [0,1)");
  if (noise_fraction > 0.0 && noise_vocab.empty())
    throw_config("synthetic spec: noise_fraction > 0 needs a noise_vocab");

  const std::vector<const std::vector<std::string>*> vocabs = {
      &negative_vocab, &neutral_vocab, &positive_vocab, &noise_vocab};
  const char* names[] = {"negative", "neutral", "positive", "noise"};
  for (size_t a = 0; a < vocabs.size(); ++a) {
    std::unordered_set<std::string> set_a(vocabs[a]->begin(), vocabs[a]->end());
    for (size_t b = a + 1; b < vocabs.size(); ++b) {
      for (const auto& term : *vocabs[b]) {
        if (set_a.count(term))
          throw_config(std::string("synthetic spec: vocabularies not "
                                   "disjoint: '") +
                       term + "' in both " + names[a] + " and " + names[b]);
      }
    }
  }
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  SyntheticCorpus out;
  Rng rng(spec.seed);
  const std::vector<const std::vector<std::string>*> sent_vocab = {
      &spec.negative_vocab, &spec.neutral_vocab, &spec.positive_vocab};

  size_t counter = 0;
  for (const auto& cat : spec.categories) {
    for (size_t i = 0; i < spec.n_docs_per_category; ++i) {
      auto sentiment = static_cast<Sentiment>(rng.uniform_int(3));
      const auto& vocab = *sent_vocab[static_cast<size_t>(sentiment)];
      size_t len = spec.doc_length_min +
                   rng.uniform_int(spec.doc_length_max - spec.doc_length_min + 1);
      std::string body;
      for (size_t t = 0; t < len; ++t) {
        const std::string* term;
        if (spec.noise_fraction > 0.0 && rng.uniform() < spec.noise_fraction) {
          term = &spec.noise_vocab[rng.uniform_int(spec.noise_vocab.size())];
        } else {
          term = &vocab[rng.uniform_int(vocab.size())];
        }
        if (!body.empty()) body.push_back(' ');
        body += *term;
      }
      Document d;
      d.id = cat.name + "-" + std::to_string(counter++);
      d.source = cat.source;
      d.category = cat.name;
      d.body = std::move(body);
      d.text = Document::derive_text(d.title, d.body);
      out.corpus.documents.push_back(std::move(d));
      out.planted_labels.push_back(sentiment);
    }
  }
  out.corpus.rebuild_categories();
  return out;
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus.documents) {
    json obj;
    obj["id"] = d.id;
    obj["source"] = source_name(d.source);
    obj["category"] = d.category;
    obj["title"] = d.title;
    obj["body"] = d.body;
    out += obj.dump();
    out.push_back('\n');
  }
  return out;
}

Corpus corpus_from_jsonl(std::istream& in) {
  if (!in) throw_io("unreadable corpus stream");
  Corpus corpus;
  std::set<std::pair<Source, std::string>> seen;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view sv = trim(line);
    if (sv.empty()) continue;
    json obj = json::parse(sv, nullptr, false);
    if (obj.is_discarded() || !obj.is_object())
      throw_data("corpus line " + std::to_string(line_no) + ": bad JSON");
    Document d;
    d.id = string_at(obj, "id");
    d.source = source_from_name(string_at(obj, "source"));
    d.category = string_at(obj, "category");
    d.title = string_at(obj, "title");
    d.body = string_at(obj, "body");
    if (d.id.empty() || d.category.empty())
      throw_data("corpus line " + std::to_string(line_no) +
                 ": id and category are required");
    if (!seen.emplace(d.source, d.id).second)
      throw_data("corpus line " + std::to_string(line_no) +
                 ": duplicate (source, id) pair " + source_name(d.source) +
                 "/" + d.id);
    d.text = Document::derive_text(d.title, d.body);
    corpus.documents.push_back(std::move(d));
  }
  if (corpus.documents.empty()) throw_data("empty corpus file");
  corpus.rebuild_categories();
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::string& path) {
  write_file(path, corpus_to_jsonl(corpus));
}

Corpus load_corpus(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open corpus file: " + path);
  return corpus_from_jsonl(in);
}

}  // namespace textlab
