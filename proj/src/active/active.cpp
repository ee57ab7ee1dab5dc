#include "sitewatch/active/active.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "sitewatch/util/rng.hpp"

namespace sitewatch {

std::string to_string(SelectionStrategy strategy) {
  return strategy == SelectionStrategy::random ? "random" : "least_confident";
}

SelectionStrategy parse_strategy(const std::string& text) {
  if (text == "least_confident") return SelectionStrategy::least_confident;
  if (text == "random") return SelectionStrategy::random;
  throw std::invalid_argument("unknown strategy '" + text + "' (expected least_confident or random)");
}

std::vector<std::string> select(const SelectionRequest& request) {
  const auto& pool = request.pool;
  if (request.budget > pool.size()) {
    throw std::invalid_argument("budget " + std::to_string(request.budget) + " exceeds pool size " +
                                std::to_string(pool.size()));
  }
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<std::string> out;
  out.reserve(request.budget);
  if (request.strategy == SelectionStrategy::least_confident) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double ca = std::abs(pool[a].p_positive - 0.5);
      const double cb = std::abs(pool[b].p_positive - 0.5);
      if (ca != cb) return ca < cb;
      return pool[a].article_id < pool[b].article_id;
    });
  } else {
    Rng rng(mix_seed(request.seed, 505));
    // Partial Fisher-Yates: the first `budget` slots are the sample.
    for (std::size_t i = 0; i < request.budget; ++i) {
      const std::size_t j = i + rng.below(order.size() - i);
      std::swap(order[i], order[j]);
    }
  }
  for (std::size_t i = 0; i < request.budget; ++i) out.push_back(pool[order[i]].article_id);
  return out;
}

namespace {

std::vector<int> require_all(const std::vector<std::optional<int>>& labels, const std::string& what) {
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) throw std::invalid_argument("acquisition experiment: article " + std::to_string(i) +
                                                " has no " + what + " label");
    out[i] = *labels[i];
  }
  return out;
}

MetricsReport evaluate(const TrainedModel& model, const FeatureMatrix& features,
                       const std::vector<std::size_t>& idx, const std::vector<int>& gold) {
  std::vector<int> pred, truth;
  for (std::size_t i : idx) {
    pred.push_back(model.p_positive(features[i]) >= 0.5 ? 1 : 0);
    truth.push_back(gold[i]);
  }
  return compute_metrics(pred, truth);
}

TrainedModel fit_subset(const FeatureMatrix& features, const std::vector<std::size_t>& idx,
                        const std::vector<int>& labels, const TrainingConfig& config) {
  FeatureMatrix x;
  x.reserve(idx.size());
  for (std::size_t i : idx) x.push_back(features[i]);
  return train(x, labels, config);
}

}  // namespace

void ExperimentReport::write_csv(std::ostream& out) const {
  out << "seed,strategy,accuracy,precision,recall,f1\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%llu,%s,%.6f,%.6f,%.6f,%.6f\n",
                  static_cast<unsigned long long>(r.seed), r.strategy.c_str(), r.metrics.accuracy,
                  r.metrics.precision, r.metrics.recall, r.metrics.f1);
    out << buf;
  }
}

void ExperimentReport::write_summary(std::ostream& out) const {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "least_confident f1 mean %.4f sd %.4f\nrandom          f1 mean %.4f sd %.4f\n"
                "paired t-test: t = %.4f, dof = %.0f, p = %.4g\n",
                active_mean, active_stddev, random_mean, random_stddev, t_test.t, t_test.dof,
                t_test.p_value);
  out << buf;
}

ExperimentReport acquisition_experiment(const Corpus& corpus, const FeatureMatrix& features,
                                        const ExperimentConfig& config) {
  if (config.seeds.size() < 2) throw std::invalid_argument("acquisition experiment needs at least 2 seeds");
  if (features.size() != corpus.size()) throw std::invalid_argument("feature rows do not match corpus size");
  if (!(config.test_fraction > 0.0 && config.test_fraction < 1.0)) {
    throw std::invalid_argument("test_fraction must lie in (0, 1)");
  }
  if (!(config.initial_fraction > 0.0 && config.initial_fraction < 1.0)) {
    throw std::invalid_argument("initial_fraction must lie in (0, 1)");
  }
  const auto gold = require_all(corpus.conservation_labels(true), "gold");
  const auto initial_labels =
      config.initial_annotator.empty()
          ? gold
          : require_all(corpus.conservation_labels(false, config.initial_annotator), config.initial_annotator);
  TrainingConfig training = config.training;
  training.loss = LossKind::ce;

  ExperimentReport report;
  for (std::uint64_t seed : config.seeds) {
    training.seed = seed;
    auto [rest, test] = stratified_split(gold, config.test_fraction, mix_seed(seed, 11));

    std::vector<int> rest_labels;
    for (std::size_t i : rest) rest_labels.push_back(initial_labels[i]);
    // Here the "validation" side of the split is the initial labeled slice.
    auto [pool_pos, initial_pos] = stratified_split(rest_labels, config.initial_fraction, mix_seed(seed, 12));
    std::vector<std::size_t> initial, pool;
    for (std::size_t p : initial_pos) initial.push_back(rest[p]);
    for (std::size_t p : pool_pos) pool.push_back(rest[p]);

    std::vector<int> initial_y;
    for (std::size_t i : initial) initial_y.push_back(initial_labels[i]);
    const TrainedModel preliminary = fit_subset(features, initial, initial_y, training);
    const MetricsReport base = evaluate(preliminary, features, test, gold);
    report.rows.push_back({seed, "baseline", base});
    report.baseline_f1.push_back(base.f1);

    SelectionRequest request;
    request.budget = config.budget;
    request.seed = seed;
    for (std::size_t i : pool) {
      const double p = preliminary.p_positive(features[i]);
      request.pool.push_back({corpus.articles()[i].id, p, p >= 0.5 ? 1 : 0, std::abs(p - 0.5)});
    }

    for (SelectionStrategy strategy : {SelectionStrategy::least_confident, SelectionStrategy::random}) {
      request.strategy = strategy;
      std::vector<std::size_t> idx = initial;
      std::vector<int> y = initial_y;
      for (const auto& id : select(request)) {
        const std::size_t i = *corpus.index_of(id);
        idx.push_back(i);
        y.push_back(gold[i]);
      }
      const TrainedModel model = fit_subset(features, idx, y, training);
      const MetricsReport m = evaluate(model, features, test, gold);
      report.rows.push_back({seed, to_string(strategy), m});
      (strategy == SelectionStrategy::least_confident ? report.active_f1 : report.random_f1).push_back(m.f1);
    }
  }
  report.active_mean = mean(report.active_f1);
  report.active_stddev = sample_stddev(report.active_f1);
  report.random_mean = mean(report.random_f1);
  report.random_stddev = sample_stddev(report.random_f1);
  report.t_test = paired_t_test(report.active_f1, report.random_f1);
  return report;
}

ExperimentReport acquisition_experiment(const Corpus& corpus, const ExperimentConfig& config) {
  const auto space = FeatureSpace::fit(corpus.articles(), SentimentLexicon::bundled(), config.features);
  return acquisition_experiment(corpus, space.featurize_all(corpus.articles()), config);
}

}  // namespace sitewatch
