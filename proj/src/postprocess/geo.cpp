#include "sitewatch/postprocess/geo.hpp"

#include <stdexcept>

#include "sitewatch/postprocess/keywords.hpp"
#include "sitewatch/util/csv.hpp"

namespace sitewatch {

std::string to_string(GeoMethod method) {
  switch (method) {
    case GeoMethod::directory: return "directory";
    case GeoMethod::alias: return "alias";
    case GeoMethod::unresolved: break;
  }
  return "unresolved";
}

Gazetteer Gazetteer::load(const std::filesystem::path& path) {
  const auto rows = csv::read_file(path.string());
  Gazetteer g;
  if (rows.empty()) return g;
  const auto& h = rows.front();
  const auto c_id = csv::column(h, "site_id");
  const auto c_name = csv::column(h, "canonical_name");
  const auto c_alias = csv::column(h, "aliases");
  const auto c_lat = csv::column(h, "lat");
  const auto c_lon = csv::column(h, "lon");
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != h.size()) {
      throw std::runtime_error("gazetteer row " + std::to_string(r) + ": wrong column count");
    }
    SiteRecord rec;
    rec.site_id = row[c_id];
    rec.canonical_name = row[c_name];
    std::size_t start = 0;
    const std::string& aliases = row[c_alias];
    while (start <= aliases.size() && !aliases.empty()) {
      const auto bar = aliases.find('|', start);
      const std::string a = aliases.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
      if (!a.empty()) rec.aliases.push_back(a);
      if (bar == std::string::npos) break;
      start = bar + 1;
    }
    try {
      rec.latitude = std::stod(row[c_lat]);
      rec.longitude = std::stod(row[c_lon]);
    } catch (const std::exception&) {
      throw std::runtime_error("gazetteer row " + std::to_string(r) + ": bad coordinates");
    }
    g.add(std::move(rec));
  }
  return g;
}

void Gazetteer::add(SiteRecord record) {
  if (record.site_id.empty()) throw std::invalid_argument("gazetteer record without site_id");
  if (!(record.latitude >= -90.0 && record.latitude <= 90.0) ||
      !(record.longitude >= -180.0 && record.longitude <= 180.0)) {
    throw std::invalid_argument("site '" + record.site_id + "' has out-of-range coordinates");
  }
  if (!index_.emplace(record.site_id, records_.size()).second) {
    throw std::invalid_argument("duplicate gazetteer site_id '" + record.site_id + "'");
  }
  records_.push_back(std::move(record));
}

const SiteRecord* Gazetteer::find(const std::string& site_id) const {
  auto it = index_.find(site_id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

GeoResult geolocate(const Article& article, const Gazetteer& gazetteer) {
  GeoResult out;
  auto resolve = [&](const SiteRecord& rec, GeoMethod method) {
    out.method = method;
    out.latitude = rec.latitude;
    out.longitude = rec.longitude;
    out.matched_site = rec.site_id;
  };
  if (const SiteRecord* rec = gazetteer.find(article.site_id)) {
    resolve(*rec, GeoMethod::directory);
    return out;
  }
  for (const auto& rec : gazetteer.records()) {
    std::vector<std::string> names{rec.canonical_name};
    names.insert(names.end(), rec.aliases.begin(), rec.aliases.end());
    if (!PhraseMatcher(names).matches(article.title).empty()) {
      resolve(rec, GeoMethod::alias);
      return out;
    }
  }
  return out;
}

}  // namespace sitewatch
