#include "soliton/config.hpp"

#include "soliton/errors.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace soliton {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty() || k.front() == '.' || k.back() == '.') return false;
  for (char c : k)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return true;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  out = std::strtod(s.c_str(), &end);
  return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

}  // namespace

Config Config::parse(std::istream& in, const std::string& source) {
  Config c;
  c.source_ = source;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    std::ostringstream where;
    where << source << ":" << line << ": ";
    if (eq == std::string::npos) throw ConfigError(where.str() + "expected 'key = value'");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError(where.str() + "invalid key '" + key + "'");
    if (value.empty()) throw ConfigError(where.str() + "empty value for '" + key + "'");
    if (c.entries_.count(key)) throw ConfigError(where.str() + "duplicate key '" + key + "'");
    c.entries_[key] = {value, line};
  }
  return c;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse(in, path.string());
}

void Config::fail(const std::string& key, const std::string& what) const {
  const auto it = entries_.find(key);
  std::ostringstream msg;
  msg << source_;
  if (it != entries_.end()) msg << ":" << it->second.line;
  msg << ": " << key << ": " << what;
  throw ConfigError(msg.str());
}

void Config::restrict_to(const std::set<std::string>& allowed) const {
  for (const auto& [key, e] : entries_)
    if (!allowed.count(key)) fail(key, "unknown key for this command");
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second.value;
}

double Config::number(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  double v;
  if (!parse_double(it->second.value, v)) fail(key, "expected a finite number, got '" + it->second.value + "'");
  return v;
}

int Config::integer(const std::string& key, int fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string& s = it->second.value;
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size() || v < -1000000000L || v > 1000000000L)
    fail(key, "expected an integer, got '" + s + "'");
  return static_cast<int>(v);
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  std::vector<double> out;
  std::stringstream ss(it->second.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v;
    if (!parse_double(trim(item), v)) fail(key, "expected a comma-separated list of numbers");
    out.push_back(v);
  }
  if (out.empty()) fail(key, "empty list");
  return out;
}

}  // namespace soliton
