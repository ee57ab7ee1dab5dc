#include "sitewatch/eval/ablation.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "sitewatch/util/rng.hpp"

namespace sitewatch {

FeatureOptions AblationOptions::default_features() {
  FeatureOptions f;
  f.mode = VectorizerMode::hashed;
  f.text_dim = 128;
  f.lda.topics = 10;
  f.lda.iterations = 100;
  return f;
}

std::vector<double> ArmResult::f1s() const {
  std::vector<double> out;
  for (const auto& m : per_seed) out.push_back(m.f1);
  return out;
}

const ArmResult& AblationReport::arm(const std::string& name) const {
  for (const auto& a : arms) {
    if (a.name == name) return a;
  }
  throw std::out_of_range("no ablation arm named " + name);
}

const ArmComparison& AblationReport::comparison(const std::string& a, const std::string& b) const {
  for (const auto& c : comparisons) {
    if (c.a == a && c.b == b) return c;
  }
  throw std::out_of_range("no comparison " + a + " vs " + b);
}

namespace {

void summarize(ArmResult& arm) {
  auto column = [&](auto field) {
    std::vector<double> v;
    for (const auto& m : arm.per_seed) v.push_back(m.*field);
    return v;
  };
  const auto acc = column(&MetricsReport::accuracy);
  const auto p = column(&MetricsReport::precision);
  const auto r = column(&MetricsReport::recall);
  const auto f = column(&MetricsReport::f1);
  arm.mean = {mean(acc), mean(p), mean(r), mean(f)};
  arm.stddev = {sample_stddev(acc), sample_stddev(p), sample_stddev(r), sample_stddev(f)};
}

void compare_all(AblationReport& report) {
  for (std::size_t i = 0; i < report.arms.size(); ++i) {
    for (std::size_t j = i + 1; j < report.arms.size(); ++j) {
      const auto a = report.arms[i].f1s();
      const auto b = report.arms[j].f1s();
      report.comparisons.push_back({report.arms[i].name, report.arms[j].name, paired_t_test(a, b)});
    }
  }
}

std::vector<int> required(const std::vector<std::optional<int>>& labels) {
  std::vector<int> out;
  for (const auto& l : labels) {
    if (!l) throw std::logic_error("synthetic corpus is missing a label");
    out.push_back(*l);
  }
  return out;
}

AblationReport losses_suite(const SyntheticSpec& spec, const std::vector<std::uint64_t>& seeds,
                            const AblationOptions& options) {
  AblationReport report;
  report.suite = "losses";
  report.seeds = seeds;
  for (const auto& name : options.arms) {
    parse_loss(name);
    report.arms.push_back({name, {}, {}, {}});
  }
  for (std::uint64_t seed : seeds) {
    SyntheticSpec s = spec;
    s.seed = seed;
    const Corpus corpus = generate_synthetic(s);
    FeatureOptions fo = options.features;
    fo.lda.seed = seed;
    const auto space = FeatureSpace::fit(corpus.articles(), SentimentLexicon::bundled(), fo);
    const FeatureMatrix x = space.featurize_all(corpus.articles(), 1);
    const auto gold = required(corpus.conservation_labels(true));
    const auto noisy = required(corpus.conservation_labels(false, kNoisyAnnotator));

    auto [train_idx, test_idx] = stratified_split(gold, options.test_fraction, mix_seed(seed, 21));
    FeatureMatrix train_x;
    std::vector<int> train_y;
    for (std::size_t i : train_idx) {
      train_x.push_back(x[i]);
      train_y.push_back(noisy[i]);
    }
    std::vector<int> test_gold;
    for (std::size_t i : test_idx) test_gold.push_back(gold[i]);

    for (auto& arm : report.arms) {
      TrainingConfig cfg = options.training;
      cfg.loss = parse_loss(arm.name);
      cfg.seed = seed;
      const TrainedModel model = train(train_x, train_y, cfg);
      std::vector<int> pred;
      for (std::size_t i : test_idx) pred.push_back(model.p_positive(x[i]) >= 0.5 ? 1 : 0);
      arm.per_seed.push_back(compute_metrics(pred, test_gold));
    }
  }
  return report;
}

AblationReport acquisition_suite(const SyntheticSpec& spec, const std::vector<std::uint64_t>& seeds,
                                 const AblationOptions& options) {
  const Corpus corpus = generate_synthetic(spec);
  ExperimentConfig cfg;
  cfg.budget = options.budget;
  cfg.seeds = seeds;
  cfg.test_fraction = options.test_fraction;
  cfg.initial_fraction = options.initial_fraction;
  cfg.initial_annotator = kNoisyAnnotator;
  cfg.training = options.training;
  cfg.features = options.features;
  cfg.features.lda.seed = spec.seed;
  const ExperimentReport exp = acquisition_experiment(corpus, cfg);

  AblationReport report;
  report.suite = "acquisition";
  report.seeds = seeds;
  for (const char* name : {"baseline", "least_confident", "random"}) {
    ArmResult arm{name, {}, {}, {}};
    for (const auto& row : exp.rows) {
      if (row.strategy == name) arm.per_seed.push_back(row.metrics);
    }
    report.arms.push_back(std::move(arm));
  }
  return report;
}

std::string fmt(const char* f, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace

AblationReport run_ablation(const std::string& suite, const SyntheticSpec& spec,
                            const std::vector<std::uint64_t>& seeds, const AblationOptions& options) {
  if (suite != "losses" && suite != "acquisition") {
    throw std::invalid_argument("unknown ablation suite '" + suite + "' (expected losses or acquisition)");
  }
  if (seeds.size() < 2) throw std::invalid_argument("ablation needs at least 2 seeds");
  spec.validate();
  AblationReport report = suite == "losses" ? losses_suite(spec, seeds, options)
                                            : acquisition_suite(spec, seeds, options);
  for (auto& arm : report.arms) summarize(arm);
  compare_all(report);
  return report;
}

void AblationReport::write_csv(std::ostream& out) const {
  out << "arm,accuracy_mean,accuracy_sd,precision_mean,precision_sd,recall_mean,recall_sd,f1_mean,f1_sd\n";
  for (const auto& a : arms) {
    out << a.name;
    for (auto [m, s] : {std::pair{a.mean.accuracy, a.stddev.accuracy}, std::pair{a.mean.precision, a.stddev.precision},
                        std::pair{a.mean.recall, a.stddev.recall}, std::pair{a.mean.f1, a.stddev.f1}}) {
      out << ',' << fmt("%.6f", m) << ',' << fmt("%.6f", s);
    }
    out << '\n';
  }
}

void AblationReport::write_seed_csv(std::ostream& out) const {
  out << "seed,arm,accuracy,precision,recall,f1\n";
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    for (const auto& a : arms) {
      const auto& m = a.per_seed[s];
      out << seeds[s] << ',' << a.name << ',' << fmt("%.6f", m.accuracy) << ',' << fmt("%.6f", m.precision)
          << ',' << fmt("%.6f", m.recall) << ',' << fmt("%.6f", m.f1) << '\n';
    }
  }
}

void AblationReport::write_table(std::ostream& out) const {
  std::size_t width = 4;
  for (const auto& a : arms) width = std::max(width, a.name.size());
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-16s  %-16s  %-16s  %-16s\n", static_cast<int>(width), "arm", "accuracy",
                "precision", "recall", "f1");
  out << "suite: " << suite << " (" << seeds.size() << " seeds)\n" << buf;
  for (const auto& a : arms) {
    auto cell = [](double m, double s) { return fmt("%.4f", m) + " +- " + fmt("%.4f", s); };
    std::snprintf(buf, sizeof buf, "%-*s  %-16s  %-16s  %-16s  %-16s\n", static_cast<int>(width), a.name.c_str(),
                  cell(a.mean.accuracy, a.stddev.accuracy).c_str(), cell(a.mean.precision, a.stddev.precision).c_str(),
                  cell(a.mean.recall, a.stddev.recall).c_str(), cell(a.mean.f1, a.stddev.f1).c_str());
    out << buf;
  }
  for (const auto& c : comparisons) {
    out << "paired t-test f1 " << c.a << " vs " << c.b << ": mean diff " << fmt("%.4f", c.f1_test.mean_difference)
        << ", t " << fmt("%.3f", c.f1_test.t) << ", p " << fmt("%.4g", c.f1_test.p_value) << '\n';
  }
}

}  // namespace sitewatch
