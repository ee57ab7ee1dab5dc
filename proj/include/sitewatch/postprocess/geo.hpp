#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sitewatch/corpus/corpus.hpp"

namespace sitewatch {

struct SiteRecord {
  std::string site_id;
  std::string canonical_name;
  std::vector<std::string> aliases;
  double latitude = 0.0;
  double longitude = 0.0;
};

// Directory of conservation sites in file order.
class Gazetteer {
 public:
  // CSV: site_id,canonical_name,aliases(|-separated),lat,lon
  static Gazetteer load(const std::filesystem::path& path);

  // Throws on out-of-range coordinates or a duplicate site_id.
  void add(SiteRecord record);
  const SiteRecord* find(const std::string& site_id) const;
  const std::vector<SiteRecord>& records() const { return records_; }

 private:
  std::vector<SiteRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class GeoMethod { directory, alias, unresolved };
std::string to_string(GeoMethod method);

struct GeoResult {
  GeoMethod method = GeoMethod::unresolved;
  std::optional<double> latitude;
  std::optional<double> longitude;
  std::string matched_site;  // gazetteer row the coordinates came from

  bool resolved() const { return method != GeoMethod::unresolved; }
};

// site_id lookup first; otherwise the first gazetteer row (in file order)
// whose canonical name or alias appears as a whole-word, case-insensitive
// phrase in the title; otherwise unresolved.
GeoResult geolocate(const Article& article, const Gazetteer& gazetteer);

}  // namespace sitewatch
