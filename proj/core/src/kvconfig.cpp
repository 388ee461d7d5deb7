#include "mcpg/kvconfig.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "mcpg/error.hpp"

namespace mcpg {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) {
    throw ValidationError("config key '" + std::string(key) + "': expected a number, got '" + s +
                          "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

KvConfig KvConfig::parse(std::istream& in, std::string_view origin) {
  KvConfig cfg;
  cfg.origin_ = origin;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(std::string(origin) + ":" + std::to_string(lineno) +
                            ": expected 'key = value'");
    }
    const auto key = trim(view.substr(0, eq));
    if (key.empty()) {
      throw ValidationError(std::string(origin) + ":" + std::to_string(lineno) + ": empty key");
    }
    cfg.entries_[std::string(key)] = std::string(trim(view.substr(eq + 1)));
  }
  return cfg;
}

KvConfig KvConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  return parse(in, path);
}

bool KvConfig::contains(std::string_view key) const { return entries_.find(key) != entries_.end(); }

const std::string& KvConfig::text(std::string_view key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw ValidationError(origin_ + ": missing key '" + std::string(key) + "'");
  }
  return it->second;
}

double KvConfig::get_double(std::string_view key) const { return to_double(key, text(key)); }

int KvConfig::get_int(std::string_view key) const {
  const double v = get_double(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ValidationError("config key '" + std::string(key) + "': expected an integer");
  }
  return static_cast<int>(v);
}

bool KvConfig::get_bool(std::string_view key) const {
  const auto& v = text(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config key '" + std::string(key) + "': expected true/false, got '" + v +
                        "'");
}

std::vector<double> KvConfig::get_doubles(std::string_view key) const {
  std::vector<double> out;
  std::string_view rest = text(key);
  while (true) {
    const auto comma = rest.find(',');
    out.push_back(to_double(key, rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

double KvConfig::get_double(std::string_view key, double fallback) const {
  return contains(key) ? get_double(key) : fallback;
}
int KvConfig::get_int(std::string_view key, int fallback) const {
  return contains(key) ? get_int(key) : fallback;
}
bool KvConfig::get_bool(std::string_view key, bool fallback) const {
  return contains(key) ? get_bool(key) : fallback;
}

void KvConfig::set(std::string key, std::string value) { entries_[std::move(key)] = std::move(value); }
void KvConfig::set(std::string key, double value) { set(std::move(key), format_double(value)); }
void KvConfig::set(std::string key, int value) { set(std::move(key), std::to_string(value)); }
void KvConfig::set(std::string key, bool value) {
  set(std::move(key), std::string(value ? "true" : "false"));
}
void KvConfig::set(std::string key, const std::vector<double>& values) {
  std::string joined;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) joined += ", ";
    joined += format_double(values[i]);
  }
  set(std::move(key), std::move(joined));
}

std::vector<std::string> KvConfig::unknown_keys(const std::vector<std::string>& known) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_) {
    if (std::find(known.begin(), known.end(), k) == known.end()) out.push_back(k);
  }
  return out;
}

void KvConfig::require_known(const std::vector<std::string>& known) const {
  const auto unknown = unknown_keys(known);
  if (!unknown.empty()) throw ValidationError(origin_ + ": unknown key '" + unknown.front() + "'");
}

void KvConfig::write(std::ostream& out) const {
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
}

}  // namespace mcpg
