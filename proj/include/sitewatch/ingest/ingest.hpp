#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sitewatch/corpus/corpus.hpp"
#include "sitewatch/util/date.hpp"
#include "sitewatch/util/kvconfig.hpp"

namespace sitewatch {

struct SearchTerm {
  std::string site_id;
  std::string term;
};

struct IngestConfig {
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  std::string endpoint_url;
  // Name of the environment variable holding the API key; the key itself
  // never appears in config files.
  std::string api_key_env = "NEWS_API_KEY";
  std::vector<SearchTerm> terms;
  std::optional<Date> date_from;
  std::optional<Date> date_to;
  std::size_t min_results = 1;
  std::size_t max_results = 100;  // kUnbounded disables the upper bound
  double timeout_seconds = 30.0;
  std::size_t max_retries = 3;
  double backoff_base_seconds = 1.0;
  std::size_t parallelism = 4;

  void validate() const;

  // Keys: endpoint, api_key_env, term (repeatable, "site_id | search text"),
  // date_from, date_to, min_results, max_results ("inf" for no bound),
  // timeout, max_retries, backoff_base, parallelism.
  static const std::set<std::string>& config_keys();
  static IngestConfig from_config(const KvConfig& kv);
};

struct HttpRequest {
  std::string endpoint_url;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::pair<std::string, std::string>> headers;
  double timeout_seconds = 30.0;

  std::optional<std::string> param(const std::string& name) const;
};

struct HttpResponse {
  int status = 0;         // 0 when no response arrived
  bool timed_out = false;
  std::string body;
  std::string error;      // transport-level failure description
};

using Transport = std::function<HttpResponse(const HttpRequest&)>;
using Sleeper = std::function<void(double seconds)>;

// Blocking HTTP(S) GET.
Transport http_transport();
// Serves "<dir>/<term_slug(q)>.json" as a 200 response body, 404 when absent.
Transport directory_transport(std::filesystem::path dir);
void real_sleep(double seconds);

// Lowercase ASCII alphanumerics, other runs collapsed to '-'.
std::string term_slug(const std::string& term);

// NewsAPI-shaped adapter. Accepts a JSON array of article objects or an
// object carrying one under "articles". Each object may hold title,
// description, content, url, source (string or {name}) and publishedAt.
// Items without a title or a parseable publishedAt are skipped; their count
// is added to `skipped` when given. Article ids are hex FNV-1a of the
// normalized URL. Throws std::runtime_error on malformed JSON.
std::vector<Article> parse_news_response(const std::string& body, const std::string& site_id,
                                         std::size_t* skipped = nullptr);

struct TermResult {
  SearchTerm term;
  std::vector<Article> articles;
  bool failed = false;
  std::string error;
  std::size_t attempts = 0;
  std::size_t skipped = 0;
};

// GET endpoint?q=term&from=..&to=.. with the key in X-Api-Key. 5xx responses
// and transport failures are retried up to max_retries times, sleeping
// backoff_base * 2^i seconds before retry i. A 4xx or malformed body fails the
// term immediately.
TermResult fetch_term(const IngestConfig& config, const SearchTerm& term, const Transport& transport,
                      const Sleeper& sleeper = real_sleep, const std::string& api_key = {});

using TermArticles = std::vector<std::pair<std::string, std::vector<Article>>>;

struct ThresholdViolation {
  std::string term;
  std::size_t count = 0;
  std::string bound;  // "below" or "above"
};

struct ThresholdResult {
  TermArticles kept;
  std::vector<ThresholdViolation> removed;
};

ThresholdResult apply_thresholds(const TermArticles& results, const IngestConfig& config);

// Lowercased scheme and host, query and fragment dropped, trailing slashes
// removed from the path.
std::string normalize_url(const std::string& url);
// Keeps the first article for each normalized URL; articles without a URL
// are all kept.
std::vector<Article> dedupe_by_url(const std::vector<Article>& articles);

struct IngestReport {
  std::vector<TermResult> terms;  // config order
  std::vector<ThresholdViolation> removed;
  std::size_t local_articles = 0;
  std::vector<Article> articles;  // merged in term order, then local drops, deduped
};

// Fetches all terms with up to config.parallelism concurrent requests and
// merges in term order. Extra JSONL files (local article drops) are appended
// after the fetched results.
IngestReport run_ingest(const IngestConfig& config, const Transport& transport,
                        const Sleeper& sleeper = real_sleep,
                        const std::vector<std::filesystem::path>& local_drops = {});

}  // namespace sitewatch
