#include "sitewatch/pipeline/emit.hpp"

#include <cctype>
#include <ostream>
#include <set>

#include <json.hpp>

#include "sitewatch/util/csv.hpp"

namespace sitewatch {

void emit_geojson(std::ostream& out, std::span<const RelevantArticle> articles) {
  nlohmann::ordered_json features = nlohmann::ordered_json::array();
  for (const auto& r : articles) {
    if (!r.geo.resolved()) continue;
    nlohmann::ordered_json props;
    props["id"] = r.article->id;
    props["title"] = r.article->title;
    props["url"] = r.article->url;
    props["published_at"] = r.article->published_at.str();
    props["conservation_score"] = r.conservation_score;
    props["infrastructure_score"] =
        r.infrastructure_score ? nlohmann::ordered_json(*r.infrastructure_score) : nlohmann::ordered_json();
    props["keywords"] = r.keywords.combined;
    props["site_id"] = r.geo.matched_site;
    props["geolocation"] = to_string(r.geo.method);
    nlohmann::ordered_json feature;
    feature["type"] = "Feature";
    feature["geometry"] = {{"type", "Point"}, {"coordinates", {*r.geo.longitude, *r.geo.latitude}}};
    feature["properties"] = std::move(props);
    features.push_back(std::move(feature));
  }
  nlohmann::ordered_json doc;
  doc["type"] = "FeatureCollection";
  doc["features"] = std::move(features);
  out << doc.dump(2) << '\n';
}

void emit_unresolved_csv(std::ostream& out, std::span<const RelevantArticle> articles) {
  csv::write_row(out, {"id", "site_id", "title"});
  for (const auto& r : articles) {
    if (r.geo.resolved()) continue;
    csv::write_row(out, {r.article->id, r.article->site_id, r.article->title});
  }
}

std::string hashtag(const std::string& keyword) {
  std::string tag;
  bool word_start = true;
  for (unsigned char c : keyword) {
    if (c < 128 && std::isalnum(c)) {
      tag += static_cast<char>(word_start ? std::toupper(c) : c);
      word_start = false;
    } else {
      word_start = true;
    }
  }
  return tag.empty() ? tag : "#" + tag;
}

std::size_t utf8_length(const std::string& text) {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

namespace {

// First `n` code points of `text`.
std::string utf8_prefix(const std::string& text, std::size_t n) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if ((static_cast<unsigned char>(text[i]) & 0xC0) != 0x80) {
      if (count == n) return text.substr(0, i);
      ++count;
    }
  }
  return text;
}

}  // namespace

TweetDraft compose_tweet(const Article& article, const KeywordSet& keywords) {
  TweetDraft d;
  d.source_article_id = article.id;
  std::set<std::string> seen;
  for (const auto& k : keywords.combined) {
    if (d.hashtags.size() == 3) break;
    std::string tag = hashtag(k);
    if (!tag.empty() && seen.insert(tag).second) d.hashtags.push_back(std::move(tag));
  }
  // An over-long URL cannot be shortened meaningfully, so it is the last
  // thing dropped, after every hashtag.
  auto suffix = [&] {
    std::string s = article.url.empty() ? std::string() : " " + article.url;
    for (const auto& t : d.hashtags) s += " " + t;
    return s;
  };
  std::string tail = suffix();
  while (utf8_length(tail) + 1 > kTweetLimit && !d.hashtags.empty()) {
    d.hashtags.pop_back();
    tail = suffix();
  }
  if (utf8_length(tail) + 1 > kTweetLimit) tail.clear();
  const std::size_t room = kTweetLimit - utf8_length(tail);
  std::string title = article.title;
  if (utf8_length(title) > room) title = utf8_prefix(title, room - 1) + "…";
  d.text = title + tail;
  return d;
}

void emit_tweets(std::ostream& out, std::span<const TweetDraft> drafts) {
  for (const auto& d : drafts) {
    std::string text = d.text;
    for (auto& c : text) {
      if (c == '\n' || c == '\t' || c == '\r') c = ' ';
    }
    out << d.source_article_id << '\t' << text << '\n';
  }
}

}  // namespace sitewatch
