#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sforge::config {

// Key/value configuration with [section] and [section.sub] headers.
// Keys are stored flattened as "section.key". '#' starts a comment.
class KeyValues {
public:
  static KeyValues parse_file(const std::string& path);
  static KeyValues parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<std::string> get_list(const std::string& key) const;  // comma-separated

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);

  // Deterministic serialization: sections and keys in sorted order.
  std::string serialize() const;

  const std::map<std::string, std::string>& items() const { return items_; }

private:
  std::map<std::string, std::string> items_;
};

// 17 significant digits, '.' decimal, shortest-faithful "%.17g".
std::string format_double(double v);

}  // namespace sforge::config
