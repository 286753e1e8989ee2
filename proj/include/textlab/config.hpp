#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace textlab {

// Minimal TOML-style config reader covering what the pipeline files use:
// [section] tables, [[section]] arrays of tables, and key = value lines with
// quoted strings, integers, floats, booleans and flat arrays. '#' comments.

struct ConfigValue {
  enum class Type { string, integer, real, boolean, array };
  Type type = Type::string;
  std::string str;
  int64_t int_val = 0;
  double real_val = 0.0;
  bool bool_val = false;
  std::vector<ConfigValue> items;

  std::string as_string(const std::string& where) const;
  int64_t as_int(const std::string& where) const;
  double as_double(const std::string& where) const;  // integer promotes
  bool as_bool(const std::string& where) const;
  std::vector<std::string> as_string_array(const std::string& where) const;
  std::vector<double> as_double_array(const std::string& where) const;
  std::vector<int64_t> as_int_array(const std::string& where) const;
};

struct ConfigTable {
  std::string name;
  std::vector<std::pair<std::string, ConfigValue>> entries;

  const ConfigValue* find(std::string_view key) const;
  bool has(std::string_view key) const { return find(key) != nullptr; }

  const ConfigValue& require(std::string_view key) const;

  std::string get_string(std::string_view key, const std::string& dflt) const;
  int64_t get_int(std::string_view key, int64_t dflt) const;
  double get_double(std::string_view key, double dflt) const;
  bool get_bool(std::string_view key, bool dflt) const;

  std::string require_string(std::string_view key) const;
  int64_t require_int(std::string_view key) const;
  double require_double(std::string_view key) const;
  std::vector<std::string> require_string_array(std::string_view key) const;

  std::string loc(std::string_view key) const;
};

struct ConfigDoc {
  ConfigTable root;                        // keys before the first section
  std::vector<ConfigTable> tables;         // [section], in file order
  std::vector<ConfigTable> table_arrays;   // [[section]] occurrences, in order

  // First [section] with this name, or nullptr.
  const ConfigTable* section(std::string_view name) const;
  // The section must exist.
  const ConfigTable& require_section(std::string_view name) const;
  // Empty table if missing (convenient for all-defaults sections).
  ConfigTable section_or_empty(std::string_view name) const;
  // All [[name]] tables in order.
  std::vector<const ConfigTable*> array_sections(std::string_view name) const;
};

ConfigDoc parse_config(std::string_view text);        // throws Error(config)
ConfigDoc load_config(const std::string& path);       // throws Error(io/config)

}  // namespace textlab
