#pragma once

// Minimal "key = value" configuration files.
//
//   # comment
//   thrust_gain = 4.0
//   lateral     = 1.0, 1.3, 1.0
//
// Keys are case sensitive; later assignments override earlier ones. Values
// are kept as text and converted on access.

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mcpg {

class KvConfig {
 public:
  static KvConfig parse(std::istream& in, std::string_view origin = "<input>");
  static KvConfig load(const std::string& path);

  bool contains(std::string_view key) const;
  const std::string& text(std::string_view key) const;

  double get_double(std::string_view key) const;
  int get_int(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<double> get_doubles(std::string_view key) const;

  double get_double(std::string_view key, double fallback) const;
  int get_int(std::string_view key, int fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;

  void set(std::string key, std::string value);
  void set(std::string key, double value);
  void set(std::string key, int value);
  void set(std::string key, bool value);
  void set(std::string key, const std::vector<double>& values);

  /// Keys not in `known`; callers use this to reject typos.
  std::vector<std::string> unknown_keys(const std::vector<std::string>& known) const;
  /// Throws ValidationError naming the first unknown key.
  void require_known(const std::vector<std::string>& known) const;

  const std::map<std::string, std::string, std::less<>>& entries() const { return entries_; }

  /// Writes sorted "key = value" lines; parse(write(c)) == c.
  void write(std::ostream& out) const;

 private:
  std::string origin_ = "<config>";
  std::map<std::string, std::string, std::less<>> entries_;
};

/// Round-trippable decimal text for a double.
std::string format_double(double v);

}  // namespace mcpg
