#include "sitewatch/ingest/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include <httplib.h>
#include <json.hpp>

#include "sitewatch/util/hash.hpp"

namespace sitewatch {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  if (text == "inf") return IngestConfig::kUnbounded;
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != text.size() || v < 0) throw std::invalid_argument(key + " must be a nonnegative integer: " + text);
  return static_cast<std::size_t>(v);
}

}  // namespace

void IngestConfig::validate() const {
  if (min_results > max_results) throw std::invalid_argument("min_results exceeds max_results");
  if (!(timeout_seconds > 0.0)) throw std::invalid_argument("timeout must be > 0");
  if (!(backoff_base_seconds >= 0.0)) throw std::invalid_argument("backoff_base must be >= 0");
  if (parallelism == 0) throw std::invalid_argument("parallelism must be >= 1");
  if (date_from && date_to && *date_to < *date_from) throw std::invalid_argument("date_to precedes date_from");
  for (const auto& t : terms) {
    if (t.term.empty()) throw std::invalid_argument("empty search term for site " + t.site_id);
  }
}

const std::set<std::string>& IngestConfig::config_keys() {
  static const std::set<std::string> keys = {"endpoint",   "api_key_env", "term",        "date_from",
                                             "date_to",    "min_results", "max_results", "timeout",
                                             "max_retries", "backoff_base", "parallelism"};
  return keys;
}

IngestConfig IngestConfig::from_config(const KvConfig& kv) {
  IngestConfig c;
  c.endpoint_url = kv.get_or("endpoint", "");
  c.api_key_env = kv.get_or("api_key_env", c.api_key_env);
  for (const auto& line : kv.get_all("term")) {
    const auto bar = line.find('|');
    if (bar == std::string::npos) throw std::invalid_argument("term must be 'site_id | search text': " + line);
    c.terms.push_back({trim(line.substr(0, bar)), trim(line.substr(bar + 1))});
  }
  if (auto v = kv.get("date_from")) c.date_from = Date::parse(*v);
  if (auto v = kv.get("date_to")) c.date_to = Date::parse(*v);
  if (auto v = kv.get("min_results")) c.min_results = parse_count("min_results", *v);
  if (auto v = kv.get("max_results")) c.max_results = parse_count("max_results", *v);
  c.timeout_seconds = kv.get_double("timeout", c.timeout_seconds);
  if (auto v = kv.get("max_retries")) c.max_retries = parse_count("max_retries", *v);
  c.backoff_base_seconds = kv.get_double("backoff_base", c.backoff_base_seconds);
  if (auto v = kv.get("parallelism")) c.parallelism = parse_count("parallelism", *v);
  c.validate();
  return c;
}

std::optional<std::string> HttpRequest::param(const std::string& name) const {
  for (const auto& [k, v] : params) {
    if (k == name) return v;
  }
  return std::nullopt;
}

Transport http_transport() {
  return [](const HttpRequest& req) {
    HttpResponse out;
    // Split "scheme://host[:port]/path" for the client.
    const auto scheme_end = req.endpoint_url.find("://");
    if (scheme_end == std::string::npos) {
      out.error = "endpoint must include a scheme: " + req.endpoint_url;
      return out;
    }
    const auto path_start = req.endpoint_url.find('/', scheme_end + 3);
    const std::string origin = req.endpoint_url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : req.endpoint_url.substr(path_start);
    httplib::Client client(origin);
    const auto secs = static_cast<time_t>(req.timeout_seconds);
    const auto usecs = static_cast<time_t>((req.timeout_seconds - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Params params;
    for (const auto& [k, v] : req.params) params.emplace(k, v);
    httplib::Headers headers;
    for (const auto& [k, v] : req.headers) headers.emplace(k, v);
    auto res = client.Get(path, params, headers);
    if (!res) {
      const auto err = res.error();
      out.timed_out = err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout;
      out.error = httplib::to_string(err);
      return out;
    }
    out.status = res->status;
    out.body = res->body;
    return out;
  };
}

Transport directory_transport(std::filesystem::path dir) {
  return [dir = std::move(dir)](const HttpRequest& req) {
    HttpResponse out;
    const auto q = req.param("q");
    const auto file = dir / (term_slug(q.value_or("")) + ".json");
    std::ifstream in(file, std::ios::binary);
    if (!in) {
      out.status = 404;
      out.body = "no fixture " + file.string();
      return out;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    out.status = 200;
    out.body = buf.str();
    return out;
  };
}

void real_sleep(double seconds) {
  if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

std::string term_slug(const std::string& term) {
  std::string out;
  bool dash = false;
  for (unsigned char c : term) {
    if (std::isalnum(c) && c < 128) {
      if (dash && !out.empty()) out += '-';
      out += static_cast<char>(std::tolower(c));
      dash = false;
    } else {
      dash = true;
    }
  }
  return out.empty() ? "term" : out;
}

std::vector<Article> parse_news_response(const std::string& body, const std::string& site_id,
                                         std::size_t* skipped) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed JSON response: ") + e.what());
  }
  const nlohmann::json* items = &doc;
  if (doc.is_object()) {
    if (!doc.contains("articles")) throw std::runtime_error("response object has no 'articles' array");
    items = &doc["articles"];
  }
  if (!items->is_array()) throw std::runtime_error("response is not an article array");

  auto text = [](const nlohmann::json& o, const char* key) -> std::string {
    if (!o.contains(key) || !o[key].is_string()) return {};
    return o[key].get<std::string>();
  };
  std::vector<Article> out;
  std::size_t dropped = 0;
  for (const auto& item : *items) {
    if (!item.is_object()) {
      ++dropped;
      continue;
    }
    Article a;
    a.site_id = site_id;
    a.title = text(item, "title");
    a.description = text(item, "description");
    a.content = text(item, "content");
    a.url = text(item, "url");
    if (item.contains("source")) {
      const auto& s = item["source"];
      if (s.is_string()) a.source = s.get<std::string>();
      else if (s.is_object()) a.source = text(s, "name");
    }
    const std::string published = text(item, "publishedAt");
    if (a.title.empty() || published.empty()) {
      ++dropped;
      continue;
    }
    try {
      a.published_at = Date::parse(published);
    } catch (const std::exception&) {
      ++dropped;
      continue;
    }
    const std::string key = a.url.empty() ? a.title + "\n" + published : normalize_url(a.url);
    a.id = hex64(fnv1a64(key));
    out.push_back(std::move(a));
  }
  if (skipped) *skipped += dropped;
  return out;
}

TermResult fetch_term(const IngestConfig& config, const SearchTerm& term, const Transport& transport,
                      const Sleeper& sleeper, const std::string& api_key) {
  TermResult result;
  result.term = term;
  HttpRequest req;
  req.endpoint_url = config.endpoint_url;
  req.params.emplace_back("q", term.term);
  if (config.date_from) req.params.emplace_back("from", config.date_from->str());
  if (config.date_to) req.params.emplace_back("to", config.date_to->str());
  if (!api_key.empty()) req.headers.emplace_back("X-Api-Key", api_key);
  req.timeout_seconds = config.timeout_seconds;

  for (std::size_t attempt = 0;; ++attempt) {
    result.attempts = attempt + 1;
    const HttpResponse res = transport(req);
    const bool retryable = res.status == 0 || res.status >= 500;
    if (!retryable) {
      if (res.status < 200 || res.status >= 300) {
        result.failed = true;
        result.error = "HTTP " + std::to_string(res.status);
        return result;
      }
      try {
        result.articles = parse_news_response(res.body, term.site_id, &result.skipped);
      } catch (const std::exception& e) {
        result.failed = true;
        result.error = e.what();
      }
      return result;
    }
    result.error = res.status == 0 ? (res.timed_out ? "timeout: " : "transport error: ") + res.error
                                   : "HTTP " + std::to_string(res.status);
    if (attempt >= config.max_retries) {
      result.failed = true;
      result.error += " after " + std::to_string(result.attempts) + " attempts";
      return result;
    }
    sleeper(config.backoff_base_seconds * std::ldexp(1.0, static_cast<int>(attempt)));
  }
}

ThresholdResult apply_thresholds(const TermArticles& results, const IngestConfig& config) {
  ThresholdResult out;
  for (const auto& [term, articles] : results) {
    const std::size_t n = articles.size();
    if (n < config.min_results) out.removed.push_back({term, n, "below"});
    else if (n > config.max_results) out.removed.push_back({term, n, "above"});
    else out.kept.emplace_back(term, articles);
  }
  return out;
}

std::string normalize_url(const std::string& url) {
  std::string u = url.substr(0, url.find_first_of("?#"));
  const auto scheme_end = u.find("://");
  std::size_t host_start = 0;
  if (scheme_end != std::string::npos) host_start = scheme_end + 3;
  const auto path_start = u.find('/', host_start);
  const std::size_t host_end = path_start == std::string::npos ? u.size() : path_start;
  std::string head = lower(u.substr(0, host_end));
  std::string path = u.substr(host_end);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return head + path;
}

std::vector<Article> dedupe_by_url(const std::vector<Article>& articles) {
  std::vector<Article> out;
  std::unordered_set<std::string> seen;
  for (const auto& a : articles) {
    if (!a.url.empty() && !seen.insert(normalize_url(a.url)).second) continue;
    out.push_back(a);
  }
  return out;
}

IngestReport run_ingest(const IngestConfig& config, const Transport& transport, const Sleeper& sleeper,
                        const std::vector<std::filesystem::path>& local_drops) {
  config.validate();
  std::string api_key;
  if (!config.api_key_env.empty()) {
    if (const char* k = std::getenv(config.api_key_env.c_str())) api_key = k;
  }
  IngestReport report;
  report.terms.resize(config.terms.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.terms.size(); i = next++) {
      report.terms[i] = fetch_term(config, config.terms[i], transport, sleeper, api_key);
    }
  };
  const std::size_t n_threads = std::min(config.parallelism, std::max<std::size_t>(1, config.terms.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  TermArticles fetched;
  for (const auto& r : report.terms) {
    if (!r.failed) fetched.emplace_back(r.term.term, r.articles);
  }
  auto thresholds = apply_thresholds(fetched, config);
  report.removed = std::move(thresholds.removed);
  std::vector<Article> merged;
  for (auto& [term, articles] : thresholds.kept) {
    merged.insert(merged.end(), articles.begin(), articles.end());
  }
  for (const auto& path : local_drops) {
    LoadResult loaded = load_corpus(path);
    for (const auto& a : loaded.corpus.articles()) merged.push_back(a);
    report.local_articles += loaded.corpus.size();
  }
  // The same story can surface under several terms; keep its first sighting.
  std::vector<Article> unique;
  std::unordered_set<std::string> ids;
  for (auto& a : dedupe_by_url(merged)) {
    if (ids.insert(a.id).second) unique.push_back(std::move(a));
  }
  report.articles = std::move(unique);
  return report;
}

}  // namespace sitewatch
