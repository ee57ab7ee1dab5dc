// Command-line entry point: one subcommand per pipeline step plus the
// weekly `run`. Exit status is 0 on success and 2 when a step fails.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "sitewatch/active/active.hpp"
#include "sitewatch/corpus/corpus.hpp"
#include "sitewatch/corpus/labels.hpp"
#include "sitewatch/corpus/synthetic.hpp"
#include "sitewatch/eval/ablation.hpp"
#include "sitewatch/eval/metrics.hpp"
#include "sitewatch/ingest/ingest.hpp"
#include "sitewatch/model/checkpoint.hpp"
#include "sitewatch/pipeline/pipeline.hpp"
#include "sitewatch/postprocess/events.hpp"
#include "sitewatch/postprocess/geo.hpp"
#include "sitewatch/postprocess/keywords.hpp"
#include "sitewatch/util/csv.hpp"

using namespace sitewatch;

namespace {

constexpr int kFailure = 2;

Corpus load_strict(const std::string& path) {
  LoadResult r = load_corpus(path);
  for (const auto& e : r.errors) std::cerr << path << ":" << e.line << ": skipped: " << e.message << "\n";
  return std::move(r.corpus);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// "1..10", "3,5,9" or a mix such as "1..3,7".
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    try {
      if (dots == std::string::npos) {
        seeds.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dots));
        const auto hi = std::stoull(part.substr(dots + 2));
        if (hi < lo) throw std::invalid_argument(part);
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw std::invalid_argument("bad seed list '" + text + "'");
    }
  }
  return seeds;
}

std::vector<std::optional<int>> target_labels(const Corpus& corpus, const std::string& target,
                                              const std::string& annotator) {
  const bool gold = annotator.empty() || annotator == kGoldAnnotator;
  if (target == "conservation") return corpus.conservation_labels(gold, annotator);
  if (target == "infrastructure") {
    // Infrastructure is only annotated on conservation-relevant articles;
    // every other labeled article counts as a negative.
    auto cons = corpus.conservation_labels(gold, annotator);
    auto infra = corpus.infrastructure_labels(gold, annotator);
    for (std::size_t i = 0; i < infra.size(); ++i) {
      if (!infra[i] && cons[i]) infra[i] = 0;
    }
    return infra;
  }
  throw std::invalid_argument("target must be conservation or infrastructure");
}

struct TrainArgs {
  std::string corpus, labels, out, target = "conservation", annotator = kGoldAnnotator;
  std::string loss = "ce", arch = "linear", mode = "hashed";
  double alpha = 0.05, beta = 0.05, lr = 1e-2, l2 = 1e-4;
  std::size_t batch = 16, epochs = 20, hidden = 64, text_dim = 256, topics = 50, lda_iterations = 200;
  std::uint64_t seed = 0;
};

int cmd_train(const TrainArgs& a) {
  Corpus corpus = load_strict(a.corpus);
  attach_labels(corpus, load_labels(a.labels));
  const auto labels = target_labels(corpus, a.target, a.annotator);

  FeatureOptions fo;
  fo.mode = parse_vectorizer_mode(a.mode);
  fo.text_dim = a.text_dim;
  fo.lda.topics = a.topics;
  fo.lda.iterations = a.lda_iterations;
  fo.lda.seed = a.seed;
  FeatureSpace space = FeatureSpace::fit(corpus.articles(), SentimentLexicon::bundled(), fo);
  const FeatureMatrix all = space.featurize_all(corpus.articles());

  FeatureMatrix x;
  std::vector<int> y;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i]) continue;
    x.push_back(all[i]);
    y.push_back(*labels[i]);
  }
  TrainingConfig cfg;
  cfg.loss = parse_loss(a.loss);
  cfg.alpha = a.alpha;
  cfg.beta = a.beta;
  cfg.learning_rate = a.lr;
  cfg.l2 = a.l2;
  cfg.batch_size = a.batch;
  cfg.epochs = a.epochs;
  cfg.seed = a.seed;
  cfg.architecture = parse_architecture(a.arch);
  cfg.hidden = a.hidden;
  TrainedModel model = train(x, y, cfg);
  save_bundle(a.out, ModelBundle{a.target, std::move(space), model});
  std::printf("trained %s model on %zu labeled articles: best epoch %zu, validation f1 %.4f\n", a.target.c_str(),
              x.size(), model.best_epoch, model.best_validation_f1);
  return 0;
}

std::vector<double> score(const ModelBundle& bundle, const std::vector<Article>& articles) {
  const FeatureMatrix x = bundle.features.featurize_all(articles);
  std::vector<double> p;
  for (const auto& row : x) p.push_back(bundle.model.p_positive(row));
  return p;
}

int cmd_predict(const std::string& model_path, const std::string& infra_path, const std::string& in,
                const std::string& out, double threshold, bool gate) {
  const Corpus corpus = load_strict(in);
  const ModelBundle cons = load_bundle(model_path);
  const auto p = score(cons, corpus.articles());
  std::vector<ArticleScores> scores(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    scores[i].article_id = corpus.articles()[i].id;
    scores[i].conservation_score = p[i];
    scores[i].conservation_label = p[i] >= threshold ? 1 : 0;
  }
  if (!infra_path.empty()) {
    const ModelBundle infra = load_bundle(infra_path);
    std::vector<std::size_t> idx;
    std::vector<Article> subset;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (!gate || scores[i].conservation_label == 1) {
        idx.push_back(i);
        subset.push_back(corpus.articles()[i]);
      }
    }
    const auto q = score(infra, subset);
    for (std::size_t n = 0; n < idx.size(); ++n) {
      scores[idx[n]].infrastructure_score = q[n];
      scores[idx[n]].infrastructure_label = q[n] >= threshold ? 1 : 0;
    }
  }
  save_predictions(corpus, scores, out);
  return 0;
}

int cmd_select(const std::string& model_path, const std::string& pool_path, std::size_t budget,
               const std::string& strategy, std::uint64_t seed, const std::string& out_path) {
  const Corpus pool = load_strict(pool_path);
  const ModelBundle bundle = load_bundle(model_path);
  const auto p = score(bundle, pool.articles());
  SelectionRequest req;
  req.budget = budget;
  req.strategy = parse_strategy(strategy);
  req.seed = seed;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    req.pool.push_back({pool.articles()[i].id, p[i], p[i] >= 0.5 ? 1 : 0, std::abs(p[i] - 0.5)});
  }
  auto out = open_out(out_path);
  for (const auto& id : select(req)) out << id << '\n';
  return 0;
}

int cmd_events(const std::string& corpus_path, const std::string& dict_path, std::vector<std::string> anchors,
               std::size_t k, std::size_t lookback, const std::string& out_path) {
  const Corpus corpus = load_strict(corpus_path);
  const auto dict = PhraseMatcher::load(dict_path);
  std::unordered_map<std::string, KeywordSet> keywords;
  for (const auto& a : corpus.articles()) keywords.emplace(a.id, extract_keywords(a, dict));
  if (anchors.empty()) {
    for (const auto& a : corpus.articles()) anchors.push_back(a.id);
  }
  std::vector<EventCluster> events;
  for (const auto& id : anchors) {
    const Article* anchor = corpus.find(id);
    if (!anchor) throw std::invalid_argument("unknown anchor article " + id);
    for (auto& e : events_for_anchor(corpus.articles(), keywords, *anchor, {k, lookback})) events.push_back(e);
  }
  auto out = open_out(out_path);
  write_events_json(out, events, corpus);
  return 0;
}

int cmd_geolocate(const std::string& corpus_path, const std::string& gaz_path, const std::string& out_path) {
  const Corpus corpus = load_strict(corpus_path);
  const auto gaz = Gazetteer::load(gaz_path);
  auto out = open_out(out_path);
  csv::write_row(out, {"id", "method", "site_id", "latitude", "longitude"});
  for (const auto& a : corpus.articles()) {
    const GeoResult g = geolocate(a, gaz);
    char lat[32] = "", lon[32] = "";
    if (g.resolved()) {
      std::snprintf(lat, sizeof lat, "%.6f", *g.latitude);
      std::snprintf(lon, sizeof lon, "%.6f", *g.longitude);
    }
    csv::write_row(out, {a.id, to_string(g.method), g.matched_site, lat, lon});
  }
  return 0;
}

void print_metrics(const char* name, const MetricsReport& m) {
  std::printf("%-10s accuracy %.4f  precision %.4f  recall %.4f  f1 %.4f  (tp %zu fp %zu tn %zu fn %zu)%s\n", name,
              m.accuracy, m.precision, m.recall, m.f1, m.tp, m.fp, m.tn, m.fn, m.degenerate ? "  [degenerate]" : "");
}

int cmd_eval(const std::string& pred_path, const std::string& gold_path, const std::string& target,
             const std::string& corpus_path, const std::string& dict_path, std::size_t k) {
  const auto preds = load_predictions(pred_path);
  std::unordered_map<std::string, int> gold;
  for (const auto& l : load_labels(gold_path)) {
    if (!l.is_gold) continue;
    if (target == "conservation") gold[l.article_id] = l.conservation_label;
    else if (l.infrastructure_label) gold[l.article_id] = *l.infrastructure_label;
    else gold[l.article_id] = 0;
  }
  std::vector<int> p, g;
  std::vector<std::string> ids;
  for (const auto& s : preds) {
    auto it = gold.find(s.article_id);
    if (it == gold.end()) continue;
    const int label = target == "conservation" ? s.conservation_label : s.infrastructure_label.value_or(0);
    p.push_back(label);
    g.push_back(it->second);
    ids.push_back(s.article_id);
  }
  if (p.empty()) throw std::runtime_error("no predictions have gold labels");
  print_metrics("model", compute_metrics(p, g));
  if (!dict_path.empty()) {
    if (corpus_path.empty()) throw std::invalid_argument("--keywords needs --corpus");
    const Corpus corpus = load_strict(corpus_path);
    const auto words = PhraseMatcher::load(dict_path).phrases();
    std::vector<int> kb;
    for (const auto& id : ids) {
      const Article* a = corpus.find(id);
      if (!a) throw std::runtime_error("article " + id + " missing from corpus");
      kb.push_back(keyword_baseline(*a, words, k));
    }
    print_metrics("keywords", compute_metrics(kb, g));
  }
  return 0;
}

int cmd_ablate(const std::string& suite, const std::string& spec_path, const std::string& seeds,
               const std::string& out_path, const std::string& seed_out) {
  SyntheticSpec spec;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw std::runtime_error("cannot open " + spec_path);
    spec = synthetic_spec_from_json(nlohmann::json::parse(in));
  }
  const auto report = run_ablation(suite, spec, parse_seeds(seeds));
  report.write_table(std::cout);
  if (!out_path.empty()) {
    auto out = open_out(out_path);
    report.write_csv(out);
  }
  if (!seed_out.empty()) {
    auto out = open_out(seed_out);
    report.write_seed_csv(out);
  }
  return 0;
}

int cmd_generate(const std::string& spec_path, const std::string& corpus_out, const std::string& labels_out) {
  SyntheticSpec spec;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw std::runtime_error("cannot open " + spec_path);
    spec = synthetic_spec_from_json(nlohmann::json::parse(in));
  }
  const Corpus corpus = generate_synthetic(spec);
  save_corpus(corpus, corpus_out);
  if (!labels_out.empty()) save_labels(corpus.labels(), labels_out);
  return 0;
}

int cmd_ingest(const std::string& config_path, const std::string& out_path, const std::string& offline,
               const std::vector<std::string>& local) {
  const auto kv = KvConfig::load(config_path, IngestConfig::config_keys(), {"term"});
  IngestConfig cfg = IngestConfig::from_config(kv);
  Transport transport;
  if (offline.empty()) {
    if (cfg.endpoint_url.empty()) throw std::invalid_argument("ingest config has no endpoint");
    transport = http_transport();
  } else {
    transport = directory_transport(offline);
  }
  std::vector<std::filesystem::path> drops(local.begin(), local.end());
  const IngestReport report = run_ingest(cfg, transport, real_sleep, drops);
  bool any_failed = false;
  for (const auto& t : report.terms) {
    std::printf("%-40s %-7s %4zu articles", t.term.term.c_str(), t.failed ? "FAILED" : "ok", t.articles.size());
    if (t.failed) std::printf("  (%s)", t.error.c_str());
    std::printf("\n");
    any_failed = any_failed || t.failed;
  }
  for (const auto& r : report.removed) {
    std::printf("dropped term '%s': %zu results, %s threshold\n", r.term.c_str(), r.count, r.bound.c_str());
  }
  Corpus corpus;
  for (const auto& a : report.articles) corpus.add_article(a);
  save_corpus(corpus, out_path);
  std::printf("wrote %zu articles to %s\n", corpus.size(), out_path.c_str());
  return 0;
}

int cmd_run(const std::string& config_path) {
  const PipelineConfig cfg = PipelineConfig::load(config_path);
  const RunManifest m = run_pipeline(cfg);
  for (const auto& s : m.stages) {
    std::printf("%-12s %-8s %zu%s%s\n", s.name.c_str(), s.status.c_str(), s.items, s.error.empty() ? "" : "  ",
                s.error.c_str());
  }
  std::printf("manifest: %s\n", (cfg.output_dir / kManifestFile).string().c_str());
  return m.ok() ? 0 : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conservation news relevance toolkit"};
  app.require_subcommand(1);
  int status = 0;
  auto guarded = [&](auto fn) {
    return [&status, fn] {
      try {
        status = fn();
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        status = kFailure;
      }
    };
  };
  // Every subcommand takes --config; `run` and `ingest` read their own
  // key = value files, the others read option defaults from it.
  auto with_defaults = [](CLI::App* sub) {
    sub->set_config("--config", "", "Read option values from a key = value file");
  };

  // ingest
  std::string ingest_config, ingest_out, ingest_offline;
  std::vector<std::string> ingest_local;
  auto* ingest = app.add_subcommand("ingest", "Fetch articles for the configured search terms");
  ingest->add_option("--config", ingest_config, "Ingest config file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", ingest_out, "Output corpus JSONL")->required();
  ingest->add_option("--offline", ingest_offline, "Read <slug>.json responses from this directory")
      ->check(CLI::ExistingDirectory);
  ingest->add_option("--local", ingest_local, "Extra article JSONL drops to merge")->check(CLI::ExistingFile);
  ingest->callback(guarded([&] { return cmd_ingest(ingest_config, ingest_out, ingest_offline, ingest_local); }));

  // train
  TrainArgs ta;
  auto* tr = app.add_subcommand("train", "Fit features and a relevance classifier");
  with_defaults(tr);
  tr->add_option("--corpus", ta.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  tr->add_option("--labels", ta.labels, "Labels CSV")->required()->check(CLI::ExistingFile);
  tr->add_option("--out", ta.out, "Model bundle path")->required();
  tr->add_option("--target", ta.target, "conservation or infrastructure")->capture_default_str();
  tr->add_option("--annotator", ta.annotator, "Annotator whose labels to train on (gold = resolved labels)")
      ->capture_default_str();
  tr->add_option("--loss", ta.loss, "ce, peer or cores")->capture_default_str();
  tr->add_option("--alpha", ta.alpha, "Peer loss weight")->capture_default_str();
  tr->add_option("--beta", ta.beta, "Confidence regularizer weight")->capture_default_str();
  tr->add_option("--lr", ta.lr, "Learning rate")->capture_default_str();
  tr->add_option("--l2", ta.l2, "L2 penalty on weights")->capture_default_str();
  tr->add_option("--batch-size", ta.batch, "Minibatch size")->capture_default_str();
  tr->add_option("--epochs", ta.epochs, "Training epochs")->capture_default_str();
  tr->add_option("--seed", ta.seed, "Random seed")->capture_default_str();
  tr->add_option("--arch", ta.arch, "linear or mlp1")->capture_default_str();
  tr->add_option("--hidden", ta.hidden, "Hidden units for mlp1")->capture_default_str();
  tr->add_option("--mode", ta.mode, "Text vectorizer: hashed or tfidf")->capture_default_str();
  tr->add_option("--text-dim", ta.text_dim, "Hashed text dimension")->capture_default_str();
  tr->add_option("--topics", ta.topics, "LDA topics")->capture_default_str();
  tr->add_option("--lda-iterations", ta.lda_iterations, "Gibbs sweeps")->capture_default_str();
  tr->callback(guarded([&] { return cmd_train(ta); }));

  // predict
  std::string pr_model, pr_infra, pr_in, pr_out;
  double pr_threshold = 0.5;
  bool pr_ungated = false;
  auto* pr = app.add_subcommand("predict", "Score a corpus with trained models");
  with_defaults(pr);
  pr->add_option("--model", pr_model, "Conservation model bundle")->required()->check(CLI::ExistingFile);
  pr->add_option("--infra-model", pr_infra, "Infrastructure model bundle")->check(CLI::ExistingFile);
  pr->add_option("--in", pr_in, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  pr->add_option("--out", pr_out, "Predictions CSV")->required();
  pr->add_option("--threshold", pr_threshold, "Decision threshold")->capture_default_str();
  pr->add_flag("--ungated", pr_ungated, "Score infrastructure on every article");
  pr->callback(guarded([&] { return cmd_predict(pr_model, pr_infra, pr_in, pr_out, pr_threshold, !pr_ungated); }));

  // select
  std::string se_model, se_pool, se_strategy = "least_confident", se_out;
  std::size_t se_budget = 300;
  std::uint64_t se_seed = 0;
  auto* se = app.add_subcommand("select", "Choose pool articles to annotate");
  with_defaults(se);
  se->add_option("--model", se_model, "Model bundle")->required()->check(CLI::ExistingFile);
  se->add_option("--pool", se_pool, "Unlabeled corpus JSONL")->required()->check(CLI::ExistingFile);
  se->add_option("--budget", se_budget, "Articles to select")->capture_default_str();
  se->add_option("--strategy", se_strategy, "least_confident or random")->capture_default_str();
  se->add_option("--seed", se_seed, "Seed for the random strategy")->capture_default_str();
  se->add_option("--out", se_out, "Selected ids, one per line")->required();
  se->callback(guarded([&] { return cmd_select(se_model, se_pool, se_budget, se_strategy, se_seed, se_out); }));

  // events
  std::string ev_corpus, ev_dict, ev_out;
  std::vector<std::string> ev_anchors;
  std::size_t ev_k = 3, ev_lookback = 0;
  auto* ev = app.add_subcommand("events", "Extract event chains around anchor articles");
  with_defaults(ev);
  ev->add_option("--corpus", ev_corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  ev->add_option("--dictionary", ev_dict, "Keyword dictionary")->required()->check(CLI::ExistingFile);
  ev->add_option("--anchor", ev_anchors, "Anchor article id (default: every article)");
  ev->add_option("--k", ev_k, "Shared keywords needed for an edge")->capture_default_str();
  ev->add_option("--lookback-weeks", ev_lookback, "0 = unlimited")->capture_default_str();
  ev->add_option("--out", ev_out, "Events JSON")->required();
  ev->callback(guarded([&] { return cmd_events(ev_corpus, ev_dict, ev_anchors, ev_k, ev_lookback, ev_out); }));

  // geolocate
  std::string ge_corpus, ge_gaz, ge_out;
  auto* ge = app.add_subcommand("geolocate", "Resolve article coordinates from the gazetteer");
  with_defaults(ge);
  ge->add_option("--corpus", ge_corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  ge->add_option("--gazetteer", ge_gaz, "Gazetteer CSV")->required()->check(CLI::ExistingFile);
  ge->add_option("--out", ge_out, "Output CSV")->required();
  ge->callback(guarded([&] { return cmd_geolocate(ge_corpus, ge_gaz, ge_out); }));

  // eval
  std::string ea_pred, ea_gold, ea_target = "conservation", ea_corpus, ea_dict;
  std::size_t ea_k = 3;
  auto* ea = app.add_subcommand("eval", "Score predictions against gold labels");
  with_defaults(ea);
  ea->add_option("--pred", ea_pred, "Predictions CSV")->required()->check(CLI::ExistingFile);
  ea->add_option("--gold", ea_gold, "Labels CSV (gold rows are used)")->required()->check(CLI::ExistingFile);
  ea->add_option("--target", ea_target, "conservation or infrastructure")->capture_default_str();
  ea->add_option("--corpus", ea_corpus, "Corpus JSONL for the keyword baseline")->check(CLI::ExistingFile);
  ea->add_option("--keywords", ea_dict, "Keyword list for the baseline")->check(CLI::ExistingFile);
  ea->add_option("--k", ea_k, "Baseline: relevant when more than k keywords match")->capture_default_str();
  ea->callback(guarded([&] { return cmd_eval(ea_pred, ea_gold, ea_target, ea_corpus, ea_dict, ea_k); }));

  // ablate
  std::string ab_suite = "losses", ab_spec, ab_seeds = "1..10", ab_out, ab_seed_out;
  auto* ab = app.add_subcommand("ablate", "Multi-seed ablation on synthetic corpora");
  with_defaults(ab);
  ab->add_option("--suite", ab_suite, "losses or acquisition")->capture_default_str();
  ab->add_option("--spec", ab_spec, "Synthetic spec JSON")->check(CLI::ExistingFile);
  ab->add_option("--seeds", ab_seeds, "Seed list, e.g. 1..10 or 1,4,9")->capture_default_str();
  ab->add_option("--out", ab_out, "Per-arm summary CSV");
  ab->add_option("--seed-out", ab_seed_out, "Per-seed CSV");
  ab->callback(guarded([&] { return cmd_ablate(ab_suite, ab_spec, ab_seeds, ab_out, ab_seed_out); }));

  // generate
  std::string gn_spec, gn_out, gn_labels;
  auto* gn = app.add_subcommand("generate", "Write a synthetic labeled corpus");
  with_defaults(gn);
  gn->add_option("--spec", gn_spec, "Synthetic spec JSON")->check(CLI::ExistingFile);
  gn->add_option("--out", gn_out, "Corpus JSONL")->required();
  gn->add_option("--labels", gn_labels, "Labels CSV");
  gn->callback(guarded([&] { return cmd_generate(gn_spec, gn_out, gn_labels); }));

  // run
  std::string run_config;
  auto* run = app.add_subcommand("run", "Weekly pipeline run");
  run->add_option("--config", run_config, "Pipeline config")->required()->check(CLI::ExistingFile);
  run->callback(guarded([&] { return cmd_run(run_config); }));

  CLI11_PARSE(app, argc, argv);
  return status;
}
