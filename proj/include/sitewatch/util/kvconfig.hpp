#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sitewatch {

// Flat "key = value" configuration. '#' starts a comment line. Keys not in
// the allowed set are rejected; only keys listed as repeatable may appear
// more than once.
class KvConfig {
 public:
  static KvConfig parse(const std::string& text, const std::set<std::string>& allowed,
                        const std::set<std::string>& repeatable = {});
  static KvConfig load(const std::filesystem::path& path, const std::set<std::string>& allowed,
                       const std::set<std::string>& repeatable = {});

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  std::vector<std::string> get_all(const std::string& key) const;

  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Resolves a path value relative to the directory of the loaded file.
  std::optional<std::filesystem::path> get_path(const std::string& key) const;

  const std::filesystem::path& base_dir() const { return base_dir_; }
  // Canonical "key=value" lines in sorted key order; used for hashing.
  std::string canonical() const;

 private:
  std::map<std::string, std::vector<std::string>> values_;
  std::filesystem::path base_dir_;
};

}  // namespace sitewatch
