#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "sitewatch/active/active.hpp"
#include "sitewatch/corpus/synthetic.hpp"
#include "sitewatch/util/rng.hpp"

using namespace sitewatch;

namespace {

std::vector<Prediction> pool_of(const std::vector<std::pair<std::string, double>>& items) {
  std::vector<Prediction> out;
  for (const auto& [id, p] : items) out.push_back({id, p, p >= 0.5, std::abs(p - 0.5)});
  return out;
}

ExperimentConfig small_experiment() {
  ExperimentConfig cfg;
  cfg.budget = 40;
  cfg.seeds = {1, 2, 3};
  cfg.initial_fraction = 0.2;
  cfg.training.epochs = 5;
  cfg.features.text_dim = 32;
  cfg.features.lda.topics = 4;
  cfg.features.lda.iterations = 10;
  return cfg;
}

Corpus small_corpus() {
  SyntheticSpec spec;
  spec.n_articles = 300;
  spec.seed = 5;
  return generate_synthetic(spec);
}

}  // namespace

TEST_CASE("least-confident selection") {
  SelectionRequest r;
  r.pool = pool_of({{"a", 0.9}, {"b", 0.55}, {"c", 0.1}, {"d", 0.48}});
  r.budget = 2;
  CHECK(select(r) == std::vector<std::string>{"d", "b"});
  r.budget = 4;
  CHECK(select(r) == std::vector<std::string>{"d", "b", "a", "c"});
  r.budget = 5;
  CHECK_THROWS(select(r));
}

TEST_CASE("confidence ties go to the smaller id") {
  SelectionRequest r;
  r.pool = pool_of({{"zeta", 0.75}, {"alpha", 0.25}, {"mid", 0.9}});
  r.budget = 2;
  CHECK(select(r) == std::vector<std::string>{"alpha", "zeta"});
}

TEST_CASE("least-confident output has non-decreasing confidence") {
  Rng rng(3);
  std::vector<std::pair<std::string, double>> items;
  for (int i = 0; i < 200; ++i) items.push_back({"id" + std::to_string(i), rng.uniform()});
  SelectionRequest r;
  r.pool = pool_of(items);
  r.budget = 120;
  const auto picked = select(r);
  std::map<std::string, double> conf;
  for (const auto& p : r.pool) conf[p.article_id] = p.confidence;
  for (std::size_t i = 1; i < picked.size(); ++i) CHECK(conf[picked[i - 1]] <= conf[picked[i]]);
}

TEST_CASE("random selection is a seeded sample without replacement") {
  std::vector<std::pair<std::string, double>> items;
  for (int i = 0; i < 50; ++i) items.push_back({"id" + std::to_string(i), 0.5});
  SelectionRequest r;
  r.pool = pool_of(items);
  r.budget = 20;
  r.strategy = SelectionStrategy::random;
  r.seed = 4;
  const auto a = select(r);
  CHECK(a == select(r));
  CHECK(std::set<std::string>(a.begin(), a.end()).size() == 20);
  r.seed = 5;
  CHECK(select(r) != a);
  CHECK(parse_strategy("random") == SelectionStrategy::random);
  CHECK_THROWS(parse_strategy("entropy"));
}

TEST_CASE("a zero budget reproduces the baseline exactly") {
  auto cfg = small_experiment();
  cfg.budget = 0;
  const auto report = acquisition_experiment(small_corpus(), cfg);
  REQUIRE(report.baseline_f1.size() == 3);
  CHECK(report.active_f1 == report.baseline_f1);
  CHECK(report.random_f1 == report.baseline_f1);
  CHECK(report.t_test.p_value == 1.0);
}

TEST_CASE("acquisition experiment is deterministic and reports every row") {
  const auto corpus = small_corpus();
  const auto cfg = small_experiment();
  const auto a = acquisition_experiment(corpus, cfg);
  const auto b = acquisition_experiment(corpus, cfg);
  std::ostringstream sa, sb;
  a.write_csv(sa);
  b.write_csv(sb);
  CHECK(sa.str() == sb.str());
  CHECK(a.rows.size() == 9);
  CHECK(sa.str().rfind("seed,strategy,accuracy,precision,recall,f1\n", 0) == 0);
  CHECK(a.rows[1].strategy == "least_confident");
  std::ostringstream summary;
  a.write_summary(summary);
  CHECK(summary.str().find("paired") != std::string::npos);
}

TEST_CASE("acquisition experiment preconditions") {
  auto cfg = small_experiment();
  cfg.seeds = {1};
  CHECK_THROWS(acquisition_experiment(small_corpus(), cfg));
  cfg = small_experiment();
  cfg.budget = 100000;
  CHECK_THROWS(acquisition_experiment(small_corpus(), cfg));
}
