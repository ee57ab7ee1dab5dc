#include "sitewatch/util/kvconfig.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>

namespace sitewatch {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

KvConfig KvConfig::parse(const std::string& text, const std::set<std::string>& allowed,
                         const std::set<std::string>& repeatable) {
  KvConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (!allowed.count(key)) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": unknown key '" + key +
                               "'");
    }
    auto& slot = cfg.values_[key];
    if (!slot.empty() && !repeatable.count(key)) {
      throw std::runtime_error("config line " + std::to_string(line_no) + ": duplicate key '" +
                               key + "'");
    }
    slot.push_back(value);
  }
  return cfg;
}

KvConfig KvConfig::load(const std::filesystem::path& path, const std::set<std::string>& allowed,
                        const std::set<std::string>& repeatable) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  KvConfig cfg = parse(text, allowed, repeatable);
  cfg.base_dir_ = path.parent_path();
  return cfg;
}

std::optional<std::string> KvConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second.back();
}

std::string KvConfig::get_or(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

std::vector<std::string> KvConfig::get_all(const std::string& key) const {
  auto it = values_.find(key);
  return it == values_.end() ? std::vector<std::string>{} : it->second;
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    double d = std::stod(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return d;
  } catch (const std::exception&) {
    throw std::runtime_error("config: '" + key + "' is not a number: " + *v);
  }
}

long long KvConfig::get_int(const std::string& key, long long fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  try {
    std::size_t used = 0;
    long long n = std::stoll(*v, &used);
    if (used != v->size()) throw std::invalid_argument(*v);
    return n;
  } catch (const std::exception&) {
    throw std::runtime_error("config: '" + key + "' is not an integer: " + *v);
  }
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
  auto v = get(key);
  if (!v) return fallback;
  std::string s = *v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::runtime_error("config: '" + key + "' is not a boolean: " + *v);
}

std::optional<std::filesystem::path> KvConfig::get_path(const std::string& key) const {
  auto v = get(key);
  if (!v) return std::nullopt;
  std::filesystem::path p(*v);
  if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
  return p.lexically_normal();
}

std::string KvConfig::canonical() const {
  std::string out;
  for (const auto& [key, vals] : values_) {
    for (const auto& v : vals) out += key + "=" + v + "\n";
  }
  return out;
}

}  // namespace sitewatch
