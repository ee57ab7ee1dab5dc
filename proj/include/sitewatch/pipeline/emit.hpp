#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sitewatch/corpus/corpus.hpp"
#include "sitewatch/postprocess/geo.hpp"
#include "sitewatch/postprocess/keywords.hpp"

namespace sitewatch {

// One conservation-relevant article with everything the emitters need.
struct RelevantArticle {
  const Article* article = nullptr;
  double conservation_score = 0.0;
  std::optional<double> infrastructure_score;
  KeywordSet keywords;
  GeoResult geo;
};

// FeatureCollection with one Point per resolved article ([lon, lat]).
// Properties: id, title, url, published_at, conservation_score,
// infrastructure_score (null when not scored), keywords.
void emit_geojson(std::ostream& out, std::span<const RelevantArticle> articles);
// Sidecar for articles without coordinates: id,site_id,title.
void emit_unresolved_csv(std::ostream& out, std::span<const RelevantArticle> articles);

inline constexpr std::size_t kTweetLimit = 280;

struct TweetDraft {
  std::string source_article_id;
  std::string text;
  std::vector<std::string> hashtags;
};

// "tiger reserve" -> "#TigerReserve": alphanumeric words kept, each word's
// first letter uppercased. Empty when the keyword has no alphanumerics.
std::string hashtag(const std::string& keyword);
// Number of UTF-8 code points.
std::size_t utf8_length(const std::string& text);

// title + " " + url + up to three distinct hashtags from the keyword set.
// The title is cut and ends in "…" when the draft would exceed 280 code
// points; hashtags are dropped from the end if even a one-character title
// does not fit, and a URL that alone exceeds the limit is left out.
TweetDraft compose_tweet(const Article& article, const KeywordSet& keywords);
// One "id<TAB>text" line per draft.
void emit_tweets(std::ostream& out, std::span<const TweetDraft> drafts);

}  // namespace sitewatch
