#include <algorithm>
#include <cerrno>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "shiftkl/cli.hpp"
#include "shiftkl/errors.hpp"

namespace shiftkl::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw InputError("key '" + key + "': expected a number, got '" + raw + "'");
  }
  return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InputError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (cfg.values_.count(key)) throw InputError(origin + ": key '" + key + "' given twice");
    cfg.values_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value) { values_[trim(key)] = trim(value); }

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || trim(assignment.substr(0, eq)).empty()) {
    throw InputError("--set expects key=value, got '" + assignment + "'");
  }
  set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

void Config::restrict_to(const std::set<std::string>& allowed, const std::string& command) const {
  for (const auto& [k, v] : values_) {
    if (!allowed.count(k)) throw InputError("unknown key '" + k + "' for command " + command);
  }
}

bool Config::has(const std::string& key) const { return values_.count(key) > 0; }

std::string Config::text(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InputError("missing required key '" + key + "'");
  return it->second;
}

std::string Config::text_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? text(key) : fallback;
}

double Config::number(const std::string& key) const { return parse_double(key, text(key)); }

double Config::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::optional<double> Config::maybe_number(const std::string& key) const {
  if (!has(key)) return std::nullopt;
  return number(key);
}

long Config::integer(const std::string& key) const {
  const std::string s = trim(text(key));
  long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InputError("key '" + key + "': expected an integer, got '" + s + "'");
  }
  return v;
}

long Config::integer_or(const std::string& key, long fallback) const { return has(key) ? integer(key) : fallback; }

std::uint64_t Config::unsigned_or(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string s = trim(text(key));
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InputError("key '" + key + "': expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::vector<double> out;
  std::istringstream in(text(key));
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw InputError("key '" + key + "': empty list");
  return out;
}

bool Config::flag_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = text(key);
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw InputError("key '" + key + "': expected true or false, got '" + v + "'");
}

std::string Config::hash_hex(const std::string& command) const {
  std::uint64_t h = fnv1a(command + "\n");
  for (const auto& [k, v] : values_) h = fnv1a(k + "=" + v + "\n", h);
  return hex64(h);
}

}  // namespace shiftkl::cli
