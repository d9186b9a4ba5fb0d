#pragma once
#include <map>
#include <string>
#include <vector>

#include "nlospf/errors.hpp"

namespace nlos {

/// Value in a config file: a number, string, boolean, or (nested) list.
struct ConfigValue {
  enum class Kind { Number, String, Boolean, NumberList, StringList, NumberListList };
  Kind kind = Kind::Number;
  double num = 0.0;
  std::string str;
  bool boolean = false;
  std::vector<double> num_list;
  std::vector<std::string> str_list;
  std::vector<std::vector<double>> num_list_list;
};

using ConfigTable = std::map<std::string, ConfigValue>;

/// Parsed key/value document with [section] tables and [[name]] table arrays.
struct ConfigDoc {
  std::map<std::string, ConfigTable> tables;
  std::map<std::string, std::vector<ConfigTable>> table_arrays;

  bool has(const std::string& table) const { return tables.count(table) != 0; }
  const ConfigTable& table(const std::string& name) const;
};

ConfigDoc parse_config(const std::string& text, const std::string& origin = "<string>");
ConfigDoc load_config(const std::string& path);

/// Lossless serialization (doubles printed with %.17g round-trip exactly).
std::string format_config(const ConfigDoc& doc);

// Typed accessors; all throw ConfigError with the key name on mismatch.
double get_number(const ConfigTable& t, const std::string& key);
double get_number_or(const ConfigTable& t, const std::string& key, double fallback);
std::string get_string(const ConfigTable& t, const std::string& key);
std::string get_string_or(const ConfigTable& t, const std::string& key,
                          const std::string& fallback);
bool get_bool_or(const ConfigTable& t, const std::string& key, bool fallback);
std::vector<double> get_triplet(const ConfigTable& t, const std::string& key);
std::vector<std::string> get_string_list_or(const ConfigTable& t, const std::string& key);
std::vector<std::vector<double>> get_rect_list_or(const ConfigTable& t,
                                                  const std::string& key);

}  // namespace nlos
