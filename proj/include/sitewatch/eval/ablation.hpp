#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sitewatch/active/active.hpp"
#include "sitewatch/corpus/synthetic.hpp"
#include "sitewatch/eval/metrics.hpp"
#include "sitewatch/eval/stats.hpp"
#include "sitewatch/features/features.hpp"
#include "sitewatch/model/trainer.hpp"

namespace sitewatch {

struct AblationOptions {
  // Losses suite arms; any of ce, peer, cores, repeats allowed.
  std::vector<std::string> arms = {"ce", "peer", "cores"};
  TrainingConfig training;
  FeatureOptions features = default_features();
  double test_fraction = 0.2;
  // Acquisition suite.
  std::size_t budget = 300;
  double initial_fraction = 0.1;

  static FeatureOptions default_features();
};

struct MetricSummary {
  double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct ArmResult {
  std::string name;
  std::vector<MetricsReport> per_seed;  // aligned with AblationReport::seeds
  MetricSummary mean;
  MetricSummary stddev;

  std::vector<double> f1s() const;
};

struct ArmComparison {
  std::string a, b;
  PairedTTest f1_test;  // paired over seeds, a - b
};

struct AblationReport {
  std::string suite;
  std::vector<std::uint64_t> seeds;
  std::vector<ArmResult> arms;
  std::vector<ArmComparison> comparisons;  // every pair, in arm order

  const ArmResult& arm(const std::string& name) const;
  const ArmComparison& comparison(const std::string& a, const std::string& b) const;

  // arm,accuracy_mean,accuracy_sd,precision_mean,...,f1_sd
  void write_csv(std::ostream& out) const;
  // seed,arm,accuracy,precision,recall,f1
  void write_seed_csv(std::ostream& out) const;
  // Aligned text table followed by paired t-test lines.
  void write_table(std::ostream& out) const;
};

// suite "losses": per seed, generate the corpus with spec.seed = seed, hold
// out a stratified gold test split, train each arm on the noisy labels of the
// rest and score on gold. suite "acquisition": generate once from `spec` and
// run the active-vs-random experiment over the seeds.
// Throws on an unknown suite or fewer than two seeds.
AblationReport run_ablation(const std::string& suite, const SyntheticSpec& spec,
                            const std::vector<std::uint64_t>& seeds,
                            const AblationOptions& options = {});

}  // namespace sitewatch
