#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sitewatch/corpus/corpus.hpp"
#include "sitewatch/postprocess/keywords.hpp"

namespace sitewatch {

// Undirected graph over the articles of one site. build_event_graph links
// two articles iff they share >= k combined keywords (lowercase).
class EventGraph {
 public:
  EventGraph(std::string site_id, std::vector<std::string> ids, std::vector<Date> dates,
             std::size_t k);

  void add_edge(std::size_t a, std::size_t b);
  bool has_edge(std::size_t a, std::size_t b) const { return adj_[a][b] != 0; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return neighbors_[v]; }
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  std::size_t size() const { return ids_.size(); }
  const std::string& site_id() const { return site_id_; }
  const std::string& id(std::size_t v) const { return ids_[v]; }
  const Date& date(std::size_t v) const { return dates_[v]; }
  std::size_t k() const { return k_; }
  std::optional<std::size_t> node(const std::string& id) const;

 private:
  std::string site_id_;
  std::vector<std::string> ids_;
  std::vector<Date> dates_;
  std::size_t k_;
  std::vector<std::vector<char>> adj_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::unordered_map<std::string, std::size_t> index_;
};

// keyword_sets[i] belongs to articles[i]. Throws on mixed site ids.
EventGraph build_event_graph(std::span<const Article> articles,
                             std::span<const KeywordSet> keyword_sets, std::size_t k = 3);

struct EventCluster {
  std::string anchor;
  std::vector<std::string> members;  // by published_at, then id

  friend bool operator==(const EventCluster&, const EventCluster&) = default;
};

// Every maximal clique containing the anchor, found by Bron-Kerbosch with
// Tomita pivoting on the anchor's closed neighborhood. Sorted by size
// (descending), then earliest member date, then member ids.
std::vector<EventCluster> extract_events(const EventGraph& graph, const std::string& anchor);

struct EventOptions {
  std::size_t k = 3;
  // 0 = unlimited lookback.
  std::size_t lookback_weeks = 0;
};

// Builds the anchor's graph from same-site articles published on or before
// the anchor (within the lookback window) and extracts its events.
// `keywords` is keyed by article id and must cover those articles.
std::vector<EventCluster> events_for_anchor(
    std::span<const Article> corpus, const std::unordered_map<std::string, KeywordSet>& keywords,
    const Article& anchor, const EventOptions& options = {});

// JSON list of {anchor, site_id, members: [{id, date, title}]}.
void write_events_json(std::ostream& out, const std::vector<EventCluster>& events,
                       const Corpus& corpus);

}  // namespace sitewatch
