#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace soliton {

/// Flat `key = value` text; keys may be dotted (`grid.nx`), `#` starts a
/// comment. Every accessor throws ConfigError naming the source line.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source = "<config>");
  static Config load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return entries_.count(key) != 0; }
  /// Rejects any key outside `allowed`.
  void restrict_to(const std::set<std::string>& allowed) const;

  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;

  const std::string& source() const { return source_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::string source_;
  std::map<std::string, Entry> entries_;
};

}  // namespace soliton
