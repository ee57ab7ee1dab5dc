#include <doctest.h>

#include <set>
#include <sstream>

#include "sitewatch/util/csv.hpp"
#include "sitewatch/util/date.hpp"
#include "sitewatch/util/hash.hpp"
#include "sitewatch/util/kvconfig.hpp"
#include "sitewatch/util/rng.hpp"

using namespace sitewatch;

TEST_CASE("csv reads quoted fields with commas, quotes and newlines") {
  std::istringstream in("a,b,c\n\"x, y\",\"say \"\"hi\"\"\",\"two\nlines\"\n\nlast,,\n");
  const auto rows = csv::read(in);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1] == csv::Row{"x, y", "say \"hi\"", "two\nlines"});
  CHECK(rows[2] == csv::Row{"last", "", ""});
}

TEST_CASE("csv write then read is the identity") {
  const csv::Row row{"plain", "com,ma", "quo\"te", "new\nline", ""};
  std::ostringstream out;
  csv::write_row(out, row);
  std::istringstream in(out.str());
  const auto rows = csv::read(in);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == row);
}

TEST_CASE("csv column lookup") {
  const csv::Row header{"id", "score"};
  CHECK(csv::column(header, "score") == 1);
  CHECK_THROWS(csv::column(header, "missing"));
}

TEST_CASE("dates parse, print and step") {
  CHECK(Date::parse("2024-02-28").plus_days(1).str() == "2024-02-29");
  CHECK(Date::parse("2023-01-05T10:00:00Z") == Date(2023, 1, 5));
  CHECK(Date(1970, 1, 2).days_since_epoch() == 1);
  CHECK(Date(2024, 1, 1) < Date(2024, 1, 2));
  CHECK_THROWS(Date::parse("2023-02-30"));
  CHECK_THROWS(Date::parse("yesterday"));
  CHECK_THROWS(Date::parse("2023-1-5"));
}

TEST_CASE("fnv1a64 and sha256 match published vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("rng draws are reproducible and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(7);
  std::vector<int> counts(5, 0);
  for (int i = 0; i < 5000; ++i) {
    const auto v = r.below(5);
    REQUIRE(v < 5);
    ++counts[v];
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  for (int c : counts) CHECK(c > 800);
  std::vector<int> items{1, 2, 3, 4, 5, 6};
  r.shuffle(items);
  CHECK(std::multiset<int>(items.begin(), items.end()) == std::multiset<int>{1, 2, 3, 4, 5, 6});
  CHECK(mix_seed(1, 2) != mix_seed(2, 1));
}

TEST_CASE("kvconfig rejects unknown and duplicate keys") {
  const std::set<std::string> allowed{"name", "count", "flag", "term"};
  const auto kv = KvConfig::parse("# comment\nname = weekly run\ncount=3\nflag = yes\nterm=a\nterm=b\n", allowed,
                                  {"term"});
  CHECK(kv.get_or("name", "") == "weekly run");
  CHECK(kv.get_int("count", 0) == 3);
  CHECK(kv.get_bool("flag", false));
  CHECK(kv.get_all("term") == std::vector<std::string>{"a", "b"});
  CHECK(kv.canonical() == "count=3\nflag=yes\nname=weekly run\nterm=a\nterm=b\n");
  CHECK_THROWS_WITH(KvConfig::parse("colour = red\n", allowed), doctest::Contains("unknown key"));
  CHECK_THROWS_WITH(KvConfig::parse("name = a\nname = b\n", allowed), doctest::Contains("duplicate"));
  CHECK_THROWS(KvConfig::parse("count = three\n", allowed).get_int("count", 0));
}
