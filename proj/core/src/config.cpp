#include "sforge/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sforge/errors.hpp"

namespace sforge::config {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValues KeyValues::parse_string(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv.items_[section.empty() ? key : section + "." + key] = value;
  }
  return kv;
}

KeyValues KeyValues::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

bool KeyValues::has(const std::string& key) const { return items_.count(key) > 0; }

std::string KeyValues::get_string(const std::string& key) const {
  auto it = items_.find(key);
  if (it == items_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
  auto it = items_.find(key);
  return it == items_.end() ? fallback : it->second;
}

double KeyValues::get_double(const std::string& key) const {
  const std::string s = get_string(key);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0')
    throw ConfigError("config key " + key + ": not a number: '" + s + "'");
  return v;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

int KeyValues::get_int(const std::string& key) const {
  const double v = get_double(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("config key " + key + ": expected an integer");
  return i;
}

int KeyValues::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config key " + key + ": expected a boolean");
}

std::vector<std::string> KeyValues::get_list(const std::string& key) const {
  std::vector<std::string> out;
  if (!has(key)) return out;
  std::istringstream in(get_string(key));
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item == "none") continue;
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void KeyValues::set(const std::string& key, const std::string& value) { items_[key] = value; }
void KeyValues::set_double(const std::string& key, double value) {
  items_[key] = format_double(value);
}
void KeyValues::set_int(const std::string& key, long long value) {
  items_[key] = std::to_string(value);
}

std::string KeyValues::serialize() const {
  std::ostringstream out;
  // Sectionless keys first so a reader never folds them into a section.
  for (const auto& [key, value] : items_)
    if (key.rfind('.') == std::string::npos) out << key << " = " << value << "\n";
  std::string current_section;
  for (const auto& [key, value] : items_) {
    const auto dot = key.rfind('.');
    if (dot == std::string::npos) continue;
    const std::string section = key.substr(0, dot);
    if (section != current_section) {
      out << "\n[" << section << "]\n";
      current_section = section;
    }
    out << key.substr(dot + 1) << " = " << value << "\n";
  }
  return out.str();
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace sforge::config
