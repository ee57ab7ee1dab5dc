#include "sitewatch/postprocess/events.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <ostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "sitewatch/features/tokenizer.hpp"

namespace sitewatch {

namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void reset(std::size_t i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }
  Bitset operator&(const Bitset& o) const {
    Bitset r(n_);
    for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & o.words_[w];
    return r;
  }
  Bitset minus(const Bitset& o) const {
    Bitset r(n_);
    for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & ~o.words_[w];
    return r;
  }
  std::size_t count_and(const Bitset& o) const {
    std::size_t c = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) c += std::popcount(words_[w] & o.words_[w]);
    return c;
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

// Bron-Kerbosch with Tomita pivot over a local vertex numbering.
class CliqueEnumerator {
 public:
  explicit CliqueEnumerator(std::vector<Bitset> adjacency) : adj_(std::move(adjacency)) {}

  void run(std::vector<std::size_t>& r, Bitset p, Bitset x,
           std::vector<std::vector<std::size_t>>& out) const {
    if (p.none() && x.none()) {
      out.push_back(r);
      return;
    }
    std::size_t pivot = 0;
    std::size_t best = 0;
    bool have_pivot = false;
    auto consider = [&](std::size_t u) {
      const std::size_t c = p.count_and(adj_[u]);
      if (!have_pivot || c > best) {
        pivot = u;
        best = c;
        have_pivot = true;
      }
    };
    p.for_each(consider);
    x.for_each(consider);
    std::vector<std::size_t> candidates;
    p.minus(adj_[pivot]).for_each([&](std::size_t v) { candidates.push_back(v); });
    for (std::size_t v : candidates) {
      r.push_back(v);
      run(r, p & adj_[v], x & adj_[v], out);
      r.pop_back();
      p.reset(v);
      x.set(v);
    }
  }

 private:
  std::vector<Bitset> adj_;
};

}  // namespace

EventGraph::EventGraph(std::string site_id, std::vector<std::string> ids, std::vector<Date> dates,
                       std::size_t k)
    : site_id_(std::move(site_id)), ids_(std::move(ids)), dates_(std::move(dates)), k_(k) {
  if (ids_.size() != dates_.size()) throw std::invalid_argument("ids and dates differ in length");
  adj_.assign(ids_.size(), std::vector<char>(ids_.size(), 0));
  neighbors_.resize(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw std::invalid_argument("duplicate node '" + ids_[i] + "'");
    }
  }
}

void EventGraph::add_edge(std::size_t a, std::size_t b) {
  if (a == b) throw std::invalid_argument("self edges are not allowed");
  if (adj_[a][b]) return;
  adj_[a][b] = adj_[b][a] = 1;
  neighbors_[a].insert(std::lower_bound(neighbors_[a].begin(), neighbors_[a].end(), b), b);
  neighbors_[b].insert(std::lower_bound(neighbors_[b].begin(), neighbors_[b].end(), a), a);
}

std::vector<std::pair<std::size_t, std::size_t>> EventGraph::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < size(); ++a) {
    for (std::size_t b : neighbors_[a]) {
      if (a < b) out.emplace_back(a, b);
    }
  }
  return out;
}

std::optional<std::size_t> EventGraph::node(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EventGraph build_event_graph(std::span<const Article> articles,
                             std::span<const KeywordSet> keyword_sets, std::size_t k) {
  if (articles.size() != keyword_sets.size()) {
    throw std::invalid_argument("one keyword set per article required");
  }
  std::vector<std::string> ids;
  std::vector<Date> dates;
  std::vector<std::set<std::string>> keys;
  const std::string site = articles.empty() ? std::string() : articles.front().site_id;
  for (std::size_t i = 0; i < articles.size(); ++i) {
    if (articles[i].site_id != site) {
      throw std::invalid_argument("event graph articles span several sites ('" + site + "', '" +
                                  articles[i].site_id + "')");
    }
    if (keyword_sets[i].article_id != articles[i].id) {
      throw std::invalid_argument("keyword set does not belong to article '" + articles[i].id + "'");
    }
    ids.push_back(articles[i].id);
    dates.push_back(articles[i].published_at);
    std::set<std::string> lowered;
    for (const auto& kw : keyword_sets[i].combined) lowered.insert(to_lower(kw));
    keys.push_back(std::move(lowered));
  }
  EventGraph graph(site, std::move(ids), std::move(dates), k);
  for (std::size_t a = 0; a < articles.size(); ++a) {
    for (std::size_t b = a + 1; b < articles.size(); ++b) {
      std::size_t shared = 0;
      for (const auto& kw : keys[a]) shared += keys[b].count(kw);
      if (shared >= k) graph.add_edge(a, b);
    }
  }
  return graph;
}

std::vector<EventCluster> extract_events(const EventGraph& graph, const std::string& anchor) {
  const auto a = graph.node(anchor);
  if (!a) throw std::invalid_argument("anchor '" + anchor + "' is not in the event graph");

  // Local numbering: 0 = anchor, 1.. = its neighbors.
  std::vector<std::size_t> local{*a};
  for (std::size_t v : graph.neighbors(*a)) local.push_back(v);
  const std::size_t m = local.size();
  std::vector<Bitset> adj(m, Bitset(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (graph.has_edge(local[i], local[j])) {
        adj[i].set(j);
        adj[j].set(i);
      }
    }
  }
  Bitset p(m);
  for (std::size_t i = 1; i < m; ++i) p.set(i);
  std::vector<std::size_t> r{0};
  std::vector<std::vector<std::size_t>> cliques;
  CliqueEnumerator(std::move(adj)).run(r, std::move(p), Bitset(m), cliques);

  std::vector<EventCluster> out;
  std::vector<Date> earliest;
  for (const auto& clique : cliques) {
    std::vector<std::size_t> members;
    for (std::size_t i : clique) members.push_back(local[i]);
    std::sort(members.begin(), members.end(), [&](std::size_t x, std::size_t y) {
      if (graph.date(x) != graph.date(y)) return graph.date(x) < graph.date(y);
      return graph.id(x) < graph.id(y);
    });
    EventCluster c;
    c.anchor = anchor;
    for (std::size_t v : members) c.members.push_back(graph.id(v));
    out.push_back(std::move(c));
    earliest.push_back(graph.date(members.front()));
  }
  std::vector<std::size_t> order(out.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (out[x].members.size() != out[y].members.size()) {
      return out[x].members.size() > out[y].members.size();
    }
    if (earliest[x] != earliest[y]) return earliest[x] < earliest[y];
    return out[x].members < out[y].members;
  });
  std::vector<EventCluster> sorted;
  for (std::size_t i : order) sorted.push_back(std::move(out[i]));
  return sorted;
}

std::vector<EventCluster> events_for_anchor(
    std::span<const Article> corpus, const std::unordered_map<std::string, KeywordSet>& keywords,
    const Article& anchor, const EventOptions& options) {
  std::vector<Article> site_articles;
  std::vector<KeywordSet> sets;
  const Date earliest = options.lookback_weeks == 0
                            ? Date(std::chrono::sys_days::min())
                            : anchor.published_at.plus_days(-7 * static_cast<int>(options.lookback_weeks));
  for (const auto& a : corpus) {
    if (a.site_id != anchor.site_id) continue;
    if (a.id != anchor.id && (a.published_at > anchor.published_at || a.published_at < earliest)) {
      continue;
    }
    auto it = keywords.find(a.id);
    if (it == keywords.end()) throw std::invalid_argument("no keywords for article '" + a.id + "'");
    site_articles.push_back(a);
    sets.push_back(it->second);
  }
  const EventGraph graph = build_event_graph(site_articles, sets, options.k);
  return extract_events(graph, anchor.id);
}

void write_events_json(std::ostream& out, const std::vector<EventCluster>& events,
                       const Corpus& corpus) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& e : events) {
    const Article* anchor = corpus.find(e.anchor);
    nlohmann::json members = nlohmann::json::array();
    for (const auto& id : e.members) {
      const Article* a = corpus.find(id);
      if (!a) throw std::invalid_argument("event member '" + id + "' not in corpus");
      members.push_back({{"id", a->id}, {"date", a->published_at.str()}, {"title", a->title}});
    }
    list.push_back({{"anchor", e.anchor},
                    {"members", std::move(members)},
                    {"site_id", anchor ? anchor->site_id : std::string()}});
  }
  out << list.dump(2) << '\n';
}

}  // namespace sitewatch
