#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sitewatch/corpus/corpus.hpp"
#include "sitewatch/eval/metrics.hpp"
#include "sitewatch/eval/stats.hpp"
#include "sitewatch/features/features.hpp"
#include "sitewatch/model/trainer.hpp"

namespace sitewatch {

enum class SelectionStrategy { least_confident, random };

std::string to_string(SelectionStrategy strategy);
SelectionStrategy parse_strategy(const std::string& text);

struct SelectionRequest {
  std::vector<Prediction> pool;
  std::size_t budget = 300;
  SelectionStrategy strategy = SelectionStrategy::least_confident;
  std::uint64_t seed = 0;  // random strategy only
};

// least_confident: ascending |p - 0.5|, ties by ascending id.
// random: seeded uniform sample without replacement.
// Throws when budget exceeds the pool.
std::vector<std::string> select(const SelectionRequest& request);

struct ExperimentConfig {
  std::size_t budget = 300;
  std::vector<std::uint64_t> seeds;
  double test_fraction = 0.2;
  // Share of the non-test articles labeled before acquisition.
  double initial_fraction = 0.1;
  // Labels for the initial slice come from this annotator; empty means gold.
  std::string initial_annotator;
  TrainingConfig training;  // loss is forced to ce for the preliminary model
  FeatureOptions features;
};

struct ExperimentRow {
  std::uint64_t seed = 0;
  std::string strategy;  // "baseline", "least_confident" or "random"
  MetricsReport metrics;
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;  // seed order, then baseline, least_confident, random
  std::vector<double> baseline_f1, active_f1, random_f1;
  double active_mean = 0.0, active_stddev = 0.0;
  double random_mean = 0.0, random_stddev = 0.0;
  PairedTTest t_test;  // active vs random

  // seed,strategy,accuracy,precision,recall,f1
  void write_csv(std::ostream& out) const;
  void write_summary(std::ostream& out) const;
};

// Runs the single-round acquisition comparison. Every seed gets its own
// test/initial/pool split; both strategies then acquire `budget` gold labels
// from the same pool and retrain with the same config. F1 is measured on the
// gold test labels. Requires gold labels for every article and >= 2 seeds.
ExperimentReport acquisition_experiment(const Corpus& corpus, const FeatureMatrix& features,
                                        const ExperimentConfig& config);
// Same, fitting the feature space on the corpus first.
ExperimentReport acquisition_experiment(const Corpus& corpus, const ExperimentConfig& config);

}  // namespace sitewatch
