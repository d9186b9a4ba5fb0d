#include "nlospf/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nlos {

const ConfigTable& ConfigDoc::table(const std::string& name) const {
  auto it = tables.find(name);
  if (it == tables.end()) throw ConfigError("missing [" + name + "] section");
  return it->second;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

ConfigValue parse_value(const std::string& raw, const std::string& origin,
                        std::size_t line) {
  ConfigValue v;
  const std::string s = trim(raw);
  if (s.empty()) fail(origin, line, "empty value");
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') fail(origin, line, "unterminated string");
    v.kind = ConfigValue::Kind::String;
    v.str = s.substr(1, s.size() - 2);
    return v;
  }
  if (s == "true" || s == "false") {
    v.kind = ConfigValue::Kind::Boolean;
    v.boolean = (s == "true");
    return v;
  }
  if (s.front() == '[') {
    if (s.back() != ']') fail(origin, line, "unterminated list");
    const std::string inner = trim(s.substr(1, s.size() - 2));
    if (!inner.empty() && inner.front() == '[') {
      // list of numeric lists: [[a, b], [c, d]]
      v.kind = ConfigValue::Kind::NumberListList;
      std::size_t pos = 0;
      while (pos < inner.size()) {
        const std::size_t open = inner.find('[', pos);
        if (open == std::string::npos) break;
        const std::size_t close = inner.find(']', open);
        if (close == std::string::npos) fail(origin, line, "unterminated inner list");
        std::vector<double> row;
        std::stringstream ss(inner.substr(open + 1, close - open - 1));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          tok = trim(tok);
          if (tok.empty()) continue;
          try {
            row.push_back(std::stod(tok));
          } catch (...) {
            fail(origin, line, "bad number '" + tok + "'");
          }
        }
        v.num_list_list.push_back(std::move(row));
        pos = close + 1;
      }
      return v;
    }
    if (!inner.empty() && inner.front() == '"') {
      v.kind = ConfigValue::Kind::StringList;
      std::stringstream ss(inner);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.size() < 2 || tok.front() != '"' || tok.back() != '"')
          fail(origin, line, "bad string list element '" + tok + "'");
        v.str_list.push_back(tok.substr(1, tok.size() - 2));
      }
      return v;
    }
    v.kind = ConfigValue::Kind::NumberList;
    std::stringstream ss(inner);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue;
      try {
        v.num_list.push_back(std::stod(tok));
      } catch (...) {
        fail(origin, line, "bad number '" + tok + "'");
      }
    }
    return v;
  }
  try {
    std::size_t used = 0;
    v.num = std::stod(s, &used);
    if (used != s.size()) fail(origin, line, "trailing characters after number");
    v.kind = ConfigValue::Kind::Number;
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(origin, line, "cannot parse value '" + s + "'");
  }
}

}  // namespace

ConfigDoc parse_config(const std::string& text, const std::string& origin) {
  ConfigDoc doc;
  ConfigTable* current = nullptr;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.size() >= 4 && line[1] == '[') {
        if (line.substr(line.size() - 2) != "]]") fail(origin, line_no, "bad [[section]]");
        const std::string name = trim(line.substr(2, line.size() - 4));
        if (name.empty()) fail(origin, line_no, "empty [[section]] name");
        doc.table_arrays[name].emplace_back();
        current = &doc.table_arrays[name].back();
      } else {
        if (line.back() != ']') fail(origin, line_no, "bad [section]");
        const std::string name = trim(line.substr(1, line.size() - 2));
        if (name.empty()) fail(origin, line_no, "empty [section] name");
        if (doc.tables.count(name)) fail(origin, line_no, "duplicate section " + name);
        current = &doc.tables[name];
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected key = value");
    if (!current) fail(origin, line_no, "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(origin, line_no, "empty key");
    if (current->count(key)) fail(origin, line_no, "duplicate key " + key);
    (*current)[key] = parse_value(line.substr(eq + 1), origin, line_no);
  }
  return doc;
}

ConfigDoc load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path);
}

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void format_value(std::ostream& os, const ConfigValue& v) {
  switch (v.kind) {
    case ConfigValue::Kind::Number:
      os << format_number(v.num);
      break;
    case ConfigValue::Kind::String:
      os << '"' << v.str << '"';
      break;
    case ConfigValue::Kind::Boolean:
      os << (v.boolean ? "true" : "false");
      break;
    case ConfigValue::Kind::NumberList: {
      os << '[';
      for (std::size_t i = 0; i < v.num_list.size(); ++i)
        os << (i ? ", " : "") << format_number(v.num_list[i]);
      os << ']';
      break;
    }
    case ConfigValue::Kind::StringList: {
      os << '[';
      for (std::size_t i = 0; i < v.str_list.size(); ++i)
        os << (i ? ", " : "") << '"' << v.str_list[i] << '"';
      os << ']';
      break;
    }
    case ConfigValue::Kind::NumberListList: {
      os << '[';
      for (std::size_t i = 0; i < v.num_list_list.size(); ++i) {
        os << (i ? ", [" : "[");
        for (std::size_t j = 0; j < v.num_list_list[i].size(); ++j)
          os << (j ? ", " : "") << format_number(v.num_list_list[i][j]);
        os << ']';
      }
      os << ']';
      break;
    }
  }
}

void format_table(std::ostream& os, const ConfigTable& t) {
  for (const auto& [key, value] : t) {
    os << key << " = ";
    format_value(os, value);
    os << '\n';
  }
}

}  // namespace

std::string format_config(const ConfigDoc& doc) {
  std::ostringstream os;
  for (const auto& [name, table] : doc.tables) {
    os << '[' << name << "]\n";
    format_table(os, table);
    os << '\n';
  }
  for (const auto& [name, tables] : doc.table_arrays)
    for (const auto& t : tables) {
      os << "[[" << name << "]]\n";
      format_table(os, t);
      os << '\n';
    }
  return os.str();
}

double get_number(const ConfigTable& t, const std::string& key) {
  auto it = t.find(key);
  if (it == t.end()) throw ConfigError("missing key '" + key + "'");
  if (it->second.kind != ConfigValue::Kind::Number)
    throw ConfigError("key '" + key + "' must be a number");
  return it->second.num;
}

double get_number_or(const ConfigTable& t, const std::string& key, double fallback) {
  return t.count(key) ? get_number(t, key) : fallback;
}

std::string get_string(const ConfigTable& t, const std::string& key) {
  auto it = t.find(key);
  if (it == t.end()) throw ConfigError("missing key '" + key + "'");
  if (it->second.kind != ConfigValue::Kind::String)
    throw ConfigError("key '" + key + "' must be a string");
  return it->second.str;
}

std::string get_string_or(const ConfigTable& t, const std::string& key,
                          const std::string& fallback) {
  return t.count(key) ? get_string(t, key) : fallback;
}

bool get_bool_or(const ConfigTable& t, const std::string& key, bool fallback) {
  auto it = t.find(key);
  if (it == t.end()) return fallback;
  if (it->second.kind != ConfigValue::Kind::Boolean)
    throw ConfigError("key '" + key + "' must be a boolean");
  return it->second.boolean;
}

std::vector<double> get_triplet(const ConfigTable& t, const std::string& key) {
  auto it = t.find(key);
  if (it == t.end()) throw ConfigError("missing key '" + key + "'");
  if (it->second.kind != ConfigValue::Kind::NumberList || it->second.num_list.size() != 3)
    throw ConfigError("key '" + key + "' must be a list of three numbers");
  return it->second.num_list;
}

std::vector<std::string> get_string_list_or(const ConfigTable& t, const std::string& key) {
  auto it = t.find(key);
  if (it == t.end()) return {};
  if (it->second.kind == ConfigValue::Kind::String) return {it->second.str};
  if (it->second.kind != ConfigValue::Kind::StringList)
    throw ConfigError("key '" + key + "' must be a string list");
  return it->second.str_list;
}

std::vector<std::vector<double>> get_rect_list_or(const ConfigTable& t,
                                                  const std::string& key) {
  auto it = t.find(key);
  if (it == t.end()) return {};
  if (it->second.kind != ConfigValue::Kind::NumberListList)
    throw ConfigError("key '" + key + "' must be a list of numeric lists");
  return it->second.num_list_list;
}

}  // namespace nlos
