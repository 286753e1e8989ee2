#include "textlab/config.hpp"

#include <cctype>

#include "textlab/error.hpp"
#include "textlab/text_io.hpp"

namespace textlab {

namespace {

[[noreturn]] void fail(size_t line, const std::string& msg) {
  throw_config("config line " + std::to_string(line) + ": " + msg);
}

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.';
}

struct Cursor {
  std::string_view s;
  size_t pos = 0;
  size_t line;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size() || s[pos] == '#';
  }
  char peek() { return pos < s.size() ? s[pos] : '\0'; }
};

ConfigValue parse_value(Cursor& c);

ConfigValue parse_scalar(Cursor& c) {
  ConfigValue v;
  c.skip_ws();
  if (c.pos >= c.s.size()) fail(c.line, "missing value");
  char ch = c.s[c.pos];
  if (ch == '"') {
    ++c.pos;
    std::string out;
    while (c.pos < c.s.size() && c.s[c.pos] != '"') {
      char d = c.s[c.pos];
      if (d == '\\') {
        ++c.pos;
        if (c.pos >= c.s.size()) fail(c.line, "dangling escape");
        char e = c.s[c.pos];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          default: fail(c.line, std::string("unknown escape \\") + e);
        }
      } else {
        out.push_back(d);
      }
      ++c.pos;
    }
    if (c.pos >= c.s.size()) fail(c.line, "unterminated string");
    ++c.pos;
    v.type = ConfigValue::Type::string;
    v.str = std::move(out);
    return v;
  }
  // bare token: bool, int, or float
  size_t start = c.pos;
  while (c.pos < c.s.size() && c.s[c.pos] != ',' && c.s[c.pos] != ']' &&
         c.s[c.pos] != '#' && c.s[c.pos] != ' ' && c.s[c.pos] != '\t')
    ++c.pos;
  std::string_view tok = c.s.substr(start, c.pos - start);
  if (tok.empty()) fail(c.line, "missing value");
  if (tok == "true" || tok == "false") {
    v.type = ConfigValue::Type::boolean;
    v.bool_val = (tok == "true");
    return v;
  }
  bool looks_float = tok.find('.') != std::string_view::npos ||
                     tok.find('e') != std::string_view::npos ||
                     tok.find('E') != std::string_view::npos ||
                     tok == "inf" || tok == "nan";
  try {
    if (looks_float) {
      v.type = ConfigValue::Type::real;
      v.real_val = parse_double(tok);
    } else {
      v.type = ConfigValue::Type::integer;
      v.int_val = parse_int(tok);
    }
  } catch (const Error&) {
    fail(c.line, "cannot parse value '" + std::string(tok) + "'");
  }
  return v;
}

ConfigValue parse_value(Cursor& c) {
  c.skip_ws();
  if (c.peek() == '[') {
    ++c.pos;
    ConfigValue v;
    v.type = ConfigValue::Type::array;
    c.skip_ws();
    if (c.peek() == ']') {
      ++c.pos;
      return v;
    }
    for (;;) {
      v.items.push_back(parse_scalar(c));
      c.skip_ws();
      if (c.peek() == ',') {
        ++c.pos;
        c.skip_ws();
        if (c.peek() == ']') {  // trailing comma
          ++c.pos;
          return v;
        }
        continue;
      }
      if (c.peek() == ']') {
        ++c.pos;
        return v;
      }
      fail(c.line, "expected ',' or ']' in array");
    }
  }
  return parse_scalar(c);
}

}  // namespace

std::string ConfigValue::as_string(const std::string& where) const {
  if (type != Type::string) throw_config(where + ": expected a string");
  return str;
}

int64_t ConfigValue::as_int(const std::string& where) const {
  if (type != Type::integer) throw_config(where + ": expected an integer");
  return int_val;
}

double ConfigValue::as_double(const std::string& where) const {
  if (type == Type::real) return real_val;
  if (type == Type::integer) return static_cast<double>(int_val);
  throw_config(where + ": expected a number");
}

bool ConfigValue::as_bool(const std::string& where) const {
  if (type != Type::boolean) throw_config(where + ": expected true/false");
  return bool_val;
}

std::vector<std::string> ConfigValue::as_string_array(
    const std::string& where) const {
  if (type != Type::array) throw_config(where + ": expected an array");
  std::vector<std::string> out;
  for (const auto& it : items) out.push_back(it.as_string(where));
  return out;
}

std::vector<double> ConfigValue::as_double_array(
    const std::string& where) const {
  if (type != Type::array) throw_config(where + ": expected an array");
  std::vector<double> out;
  for (const auto& it : items) out.push_back(it.as_double(where));
  return out;
}

std::vector<int64_t> ConfigValue::as_int_array(const std::string& where) const {
  if (type != Type::array) throw_config(where + ": expected an array");
  std::vector<int64_t> out;
  for (const auto& it : items) out.push_back(it.as_int(where));
  return out;
}

const ConfigValue* ConfigTable::find(std::string_view key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

std::string ConfigTable::loc(std::string_view key) const {
  return (name.empty() ? std::string("(root)") : "[" + name + "]") + " " +
         std::string(key);
}

const ConfigValue& ConfigTable::require(std::string_view key) const {
  const ConfigValue* v = find(key);
  if (!v) throw_config("missing required key " + loc(key));
  return *v;
}

std::string ConfigTable::get_string(std::string_view key,
                                    const std::string& dflt) const {
  const ConfigValue* v = find(key);
  return v ? v->as_string(loc(key)) : dflt;
}

int64_t ConfigTable::get_int(std::string_view key, int64_t dflt) const {
  const ConfigValue* v = find(key);
  return v ? v->as_int(loc(key)) : dflt;
}

double ConfigTable::get_double(std::string_view key, double dflt) const {
  const ConfigValue* v = find(key);
  return v ? v->as_double(loc(key)) : dflt;
}

bool ConfigTable::get_bool(std::string_view key, bool dflt) const {
  const ConfigValue* v = find(key);
  return v ? v->as_bool(loc(key)) : dflt;
}

std::string ConfigTable::require_string(std::string_view key) const {
  return require(key).as_string(loc(key));
}

int64_t ConfigTable::require_int(std::string_view key) const {
  return require(key).as_int(loc(key));
}

double ConfigTable::require_double(std::string_view key) const {
  return require(key).as_double(loc(key));
}

std::vector<std::string> ConfigTable::require_string_array(
    std::string_view key) const {
  return require(key).as_string_array(loc(key));
}

const ConfigTable* ConfigDoc::section(std::string_view name) const {
  for (const auto& t : tables)
    if (t.name == name) return &t;
  return nullptr;
}

const ConfigTable& ConfigDoc::require_section(std::string_view name) const {
  const ConfigTable* t = section(name);
  if (!t) throw_config("missing required config section [" + std::string(name) + "]");
  return *t;
}

ConfigTable ConfigDoc::section_or_empty(std::string_view name) const {
  const ConfigTable* t = section(name);
  if (t) return *t;
  ConfigTable empty;
  empty.name = std::string(name);
  return empty;
}

std::vector<const ConfigTable*> ConfigDoc::array_sections(
    std::string_view name) const {
  std::vector<const ConfigTable*> out;
  for (const auto& t : table_arrays)
    if (t.name == name) out.push_back(&t);
  return out;
}

ConfigDoc parse_config(std::string_view text) {
  ConfigDoc doc;
  doc.root.name = "";
  ConfigTable* current = &doc.root;

  size_t line_no = 0;
  for (std::string_view raw : split(text, '\n')) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line[0] == '#') continue;

    if (line[0] == '[') {
      bool is_array = line.size() > 1 && line[1] == '[';
      size_t open = is_array ? 2 : 1;
      std::string_view close_tok = is_array ? "]]" : "]";
      size_t close = line.find(close_tok, open);
      if (close == std::string_view::npos)
        fail(line_no, "unterminated section header");
      std::string_view name = trim(line.substr(open, close - open));
      if (name.empty()) fail(line_no, "empty section name");
      std::string_view rest = trim(line.substr(close + close_tok.size()));
      if (!rest.empty() && rest[0] != '#')
        fail(line_no, "trailing junk after section header");
      ConfigTable t;
      t.name = std::string(name);
      if (is_array) {
        doc.table_arrays.push_back(std::move(t));
        current = &doc.table_arrays.back();
      } else {
        for (const auto& existing : doc.tables)
          if (existing.name == t.name)
            fail(line_no, "duplicate section [" + t.name + "]");
        doc.tables.push_back(std::move(t));
        current = &doc.tables.back();
      }
      continue;
    }

    size_t key_end = 0;
    while (key_end < line.size() && is_bare_key_char(line[key_end])) ++key_end;
    std::string key(trim(line.substr(0, key_end)));
    std::string_view after = trim(line.substr(key_end));
    if (key.empty() || after.empty() || after[0] != '=')
      fail(line_no, "expected 'key = value'");

    Cursor c{after.substr(1), 0, line_no};
    ConfigValue v = parse_value(c);
    if (!c.done()) fail(line_no, "trailing junk after value");
    if (current->find(key))
      fail(line_no, "duplicate key '" + key + "' in section [" +
                        current->name + "]");
    current->entries.emplace_back(std::move(key), std::move(v));
  }
  return doc;
}

ConfigDoc load_config(const std::string& path) {
  return parse_config(read_file(path));
}

}  // namespace textlab
