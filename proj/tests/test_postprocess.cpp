#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "sitewatch/postprocess/events.hpp"
#include "sitewatch/postprocess/geo.hpp"
#include "sitewatch/postprocess/keywords.hpp"
#include "sitewatch/util/rng.hpp"
#include "test_support.hpp"

using namespace sitewatch;

namespace {

Article make(const std::string& id, const std::string& site, Date date, std::string content,
             std::string title = "Headline") {
  Article a;
  a.id = id;
  a.site_id = site;
  a.title = std::move(title);
  a.content = std::move(content);
  a.published_at = date;
  return a;
}

KeywordSet keywords_of(const std::string& id, std::vector<std::string> words) {
  KeywordSet k;
  k.article_id = id;
  k.dictionary_hits = words;
  k.combined = std::move(words);
  return k;
}

using MemberSet = std::set<std::string>;

// Every maximal clique containing the anchor, by checking all subsets of the
// other vertices.
std::set<MemberSet> brute_force_cliques(const EventGraph& g, std::size_t anchor) {
  std::vector<std::size_t> others;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (v != anchor) others.push_back(v);
  }
  auto is_clique = [&](const std::vector<std::size_t>& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j)
        if (!g.has_edge(s[i], s[j])) return false;
    return true;
  };
  std::set<MemberSet> out;
  for (std::uint32_t mask = 0; mask < (1u << others.size()); ++mask) {
    std::vector<std::size_t> s{anchor};
    for (std::size_t i = 0; i < others.size(); ++i)
      if (mask >> i & 1u) s.push_back(others[i]);
    if (!is_clique(s)) continue;
    bool maximal = true;
    for (std::size_t v = 0; v < g.size() && maximal; ++v) {
      if (std::find(s.begin(), s.end(), v) != s.end()) continue;
      auto t = s;
      t.push_back(v);
      if (is_clique(t)) maximal = false;
    }
    if (!maximal) continue;
    MemberSet m;
    for (auto v : s) m.insert(g.id(v));
    out.insert(m);
  }
  return out;
}

Gazetteer sample_gazetteer() {
  Gazetteer g;
  g.add({"chitwan", "Chitwan National Park", {"Chitwan"}, 27.5, 84.3});
  g.add({"kaziranga", "Kaziranga National Park", {"Kaziranga", "KNP"}, 26.6, 93.4});
  return g;
}

}  // namespace

TEST_CASE("dictionary hits are case-insensitive whole-phrase matches") {
  const PhraseMatcher dict({"tiger reserve", "Road", "park"});
  const auto k = extract_keywords(make("a", "s", {}, "the tiger reserve road"), dict);
  CHECK(k.dictionary_hits == std::vector<std::string>{"tiger reserve", "Road"});
  CHECK(dict.matches("parking lot").empty());
  CHECK(dict.matches("Tiger\nReserve") == std::vector<std::string>{"tiger reserve"});
}

TEST_CASE("salient terms are mid-sentence capitalized runs") {
  const auto terms = extract_salient_terms(
      make("a", "s", {}, "Officials visited Kishtwar National Park on Monday. Rangers agreed."));
  CHECK(std::find(terms.begin(), terms.end(), "Kishtwar National Park") != terms.end());
  CHECK(std::find(terms.begin(), terms.end(), "Rangers") == terms.end());
  CHECK(std::find(terms.begin(), terms.end(), "Monday") == terms.end());

  const auto repeated = extract_salient_terms(
      make("a", "s", {}, "the WWF team met the WWF board and the WWF staff; also Nepal once"));
  CHECK(std::find(repeated.begin(), repeated.end(), "WWF") != repeated.end());
  CHECK(std::find(repeated.begin(), repeated.end(), "Nepal") == repeated.end());
}

TEST_CASE("keyword sets combine dictionary hits then new salient terms") {
  const PhraseMatcher dict({"kishtwar national park", "road"});
  const Article a = make("a", "s", {}, "A new road near Kishtwar National Park was approved by Forest Minister Rao.");
  const auto k = extract_keywords(a, dict);
  CHECK(k.dictionary_hits == std::vector<std::string>{"road", "kishtwar national park"});
  CHECK(k.combined ==
        std::vector<std::string>{"road", "kishtwar national park", "Forest Minister Rao"});
  CHECK(extract_keywords(a, dict) == k);

  Article empty;
  empty.id = "e";
  const auto none = extract_keywords(empty, dict);
  CHECK(none.combined.empty());
  CHECK(none.salient_terms.empty());
}

TEST_CASE("edge rule at the k = 3 boundary") {
  const std::vector<Article> arts{make("a", "s", Date(2022, 1, 1), ""),
                                  make("b", "s", Date(2022, 1, 2), ""),
                                  make("c", "s", Date(2022, 1, 3), "")};
  const std::vector<KeywordSet> kw{keywords_of("a", {"x", "y", "Z"}), keywords_of("b", {"X", "y", "z"}),
                                   keywords_of("c", {"x", "y", "q"})};
  const auto g = build_event_graph(arts, kw, 3);
  CHECK(g.has_edge(0, 1));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK_FALSE(g.has_edge(1, 2));
  CHECK(build_event_graph(arts, kw, 2).edges().size() == 3);

  const std::vector<KeywordSet> disjoint{keywords_of("a", {"p"}), keywords_of("b", {"q"}),
                                         keywords_of("c", {"r"})};
  CHECK(build_event_graph(arts, disjoint, 1).edges().empty());

  auto mixed = arts;
  mixed[2].site_id = "other";
  CHECK_THROWS(build_event_graph(mixed, kw, 3));
}

TEST_CASE("isolated anchor forms its own event") {
  EventGraph g("s", {"a", "b"}, {Date(2022, 1, 1), Date(2022, 1, 2)}, 3);
  const auto ev = extract_events(g, "a");
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].members == std::vector<std::string>{"a"});
  CHECK(ev[0].anchor == "a");
}

TEST_CASE("events are sorted by size then earliest date; members by date") {
  // Triangle {a, b, c} and edge {a, d}; d is older than everything.
  EventGraph g("s", {"a", "b", "c", "d"},
               {Date(2022, 1, 5), Date(2022, 1, 3), Date(2022, 1, 3), Date(2021, 12, 1)}, 3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  g.add_edge(1, 2);
  g.add_edge(0, 3);
  const auto ev = extract_events(g, "a");
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].members == std::vector<std::string>{"b", "c", "a"});
  CHECK(ev[1].members == std::vector<std::string>{"d", "a"});
}

TEST_CASE("extract_events equals brute-force maximal cliques") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(15);
    std::vector<std::string> ids;
    std::vector<Date> dates;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back("n" + std::to_string(i));
      dates.push_back(Date(2022, 1, 1).plus_days(static_cast<int>(rng.below(10))));
    }
    EventGraph g("s", ids, dates, 3);
    const double density = rng.uniform();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.bernoulli(density)) g.add_edge(i, j);
    const std::size_t anchor = rng.below(n);
    const auto events = extract_events(g, ids[anchor]);
    std::set<MemberSet> got;
    for (const auto& e : events) got.insert(MemberSet(e.members.begin(), e.members.end()));
    CHECK(got.size() == events.size());
    CHECK(got == brute_force_cliques(g, anchor));
    for (std::size_t i = 1; i < events.size(); ++i) {
      CHECK(events[i - 1].members.size() >= events[i].members.size());
    }
  }
}

TEST_CASE("events_for_anchor only looks back within the site") {
  const Date d(2022, 6, 10);
  const std::vector<Article> corpus{
      make("old", "s", d.plus_days(-60), ""), make("recent", "s", d.plus_days(-3), ""),
      make("anchor", "s", d, ""), make("future", "s", d.plus_days(2), ""),
      make("elsewhere", "t", d.plus_days(-1), "")};
  std::unordered_map<std::string, KeywordSet> kw;
  for (const auto& a : corpus) kw[a.id] = keywords_of(a.id, {"x", "y", "z"});
  auto ev = events_for_anchor(corpus, kw, corpus[2]);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].members == std::vector<std::string>{"old", "recent", "anchor"});
  ev = events_for_anchor(corpus, kw, corpus[2], {3, 2});
  REQUIRE(ev.size() == 1);
  CHECK(ev[0].members == std::vector<std::string>{"recent", "anchor"});

  Corpus c;
  for (const auto& a : corpus) c.add_article(a);
  std::ostringstream out;
  write_events_json(out, ev, c);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j[0]["anchor"] == "anchor");
  CHECK(j[0]["members"][0]["id"] == "recent");
}

TEST_CASE("geolocation by directory, alias, or not at all") {
  const auto g = sample_gazetteer();
  auto r = geolocate(make("a", "chitwan", {}, "", "Rhino count rises"), g);
  CHECK(r.method == GeoMethod::directory);
  CHECK(*r.latitude == 27.5);
  CHECK(*r.longitude == 84.3);

  r = geolocate(make("b", "unknown", {}, "", "Flooding hits knp again"), g);
  CHECK(r.method == GeoMethod::alias);
  CHECK(r.matched_site == "kaziranga");
  CHECK(*r.latitude == 26.6);

  r = geolocate(make("c", "unknown", {}, "", "Chitwanese food festival"), g);
  CHECK_FALSE(r.resolved());
  CHECK_FALSE(r.latitude.has_value());
}

TEST_CASE("gazetteer validation and loading") {
  Gazetteer g;
  CHECK_THROWS(g.add({"x", "X", {}, 91.0, 0.0}));
  CHECK_THROWS(g.add({"x", "X", {}, 0.0, -181.0}));
  g.add({"x", "X", {}, 0.0, 0.0});
  CHECK_THROWS(g.add({"x", "Y", {}, 1.0, 1.0}));

  testing::TempDir dir("gaz");
  testing::write_file(dir / "g.csv",
                      "site_id,canonical_name,aliases,lat,lon\n"
                      "sund,Sundarbans,Sundarban|Sunderbans,21.9,89.2\n");
  const auto loaded = Gazetteer::load(dir / "g.csv");
  REQUIRE(loaded.records().size() == 1);
  CHECK(loaded.find("sund")->aliases == std::vector<std::string>{"Sundarban", "Sunderbans"});
}
