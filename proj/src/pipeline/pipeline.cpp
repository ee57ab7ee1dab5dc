#include "sitewatch/pipeline/pipeline.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "sitewatch/model/checkpoint.hpp"
#include "sitewatch/pipeline/emit.hpp"
#include "sitewatch/postprocess/events.hpp"
#include "sitewatch/util/hash.hpp"

namespace sitewatch {

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["tool"] = "sitewatch";
  j["status"] = ok() ? "ok" : "failed";
  if (!ok()) j["failed_stage"] = failed_stage;
  j["run_date"] = run_date;
  j["seed"] = seed;
  j["config_sha256"] = config_sha256;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& in : inputs) j["inputs"].push_back({{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}});
  j["stages"] = nlohmann::ordered_json::array();
  for (const auto& s : stages) {
    nlohmann::ordered_json st{{"name", s.name}, {"status", s.status}, {"items", s.items}};
    if (!s.error.empty()) st["error"] = s.error;
    j["stages"].push_back(std::move(st));
  }
  j["artifacts"] = nlohmann::ordered_json::array();
  for (const auto& a : artifacts) j["artifacts"].push_back({{"path", a.path}, {"sha256", a.sha256}, {"bytes", a.bytes}});
  return j;
}

namespace {

struct RunState {
  const PipelineConfig& config;
  RunManifest& manifest;
  Corpus corpus;
  std::vector<FeatureRow> conservation_x;
  std::vector<ArticleScores> scores;
  std::vector<std::size_t> reported;  // positive articles inside the run window
  std::unordered_map<std::string, KeywordSet> keywords;
  std::vector<RelevantArticle> relevant;
  std::vector<EventCluster> events;
  std::optional<ModelBundle> conservation;
  std::optional<ModelBundle> infrastructure;

  void write_artifact(const std::string& name, const std::string& content) {
    const auto path = config.output_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    out.close();
    if (!out) throw std::runtime_error("failed writing " + path.string());
    manifest.artifacts.push_back({name, sha256_hex(content), content.size()});
  }
};

bool in_window(const PipelineConfig& c, const Article& a) {
  if (a.published_at > c.run_date) return false;
  if (c.window_days == 0) return true;
  return a.published_at > c.run_date.plus_days(-static_cast<int>(c.window_days));
}

std::size_t stage_load(RunState& s) {
  LoadResult loaded = load_corpus(s.config.corpus);
  if (loaded.skipped) {
    throw std::runtime_error(std::to_string(loaded.skipped) + " malformed corpus lines, first at line " +
                             std::to_string(loaded.errors.front().line) + ": " + loaded.errors.front().message);
  }
  s.corpus = std::move(loaded.corpus);
  s.conservation = load_bundle(s.config.conservation_model);
  s.infrastructure = load_bundle(s.config.infrastructure_model);
  return s.corpus.size();
}

std::size_t stage_featurize(RunState& s) {
  s.conservation_x = s.conservation->features.featurize_all(s.corpus.articles());
  return s.conservation_x.size();
}

std::size_t stage_classify(RunState& s) {
  const auto& articles = s.corpus.articles();
  const auto& cm = s.conservation->model;
  const auto& im = s.infrastructure->model;
  s.scores.resize(articles.size());
  std::vector<std::size_t> infra_idx;
  for (std::size_t i = 0; i < articles.size(); ++i) {
    auto& sc = s.scores[i];
    sc.article_id = articles[i].id;
    if (s.conservation_x[i].size() != cm.input_dim()) throw std::runtime_error("conservation feature dimension mismatch");
    sc.conservation_score = cm.p_positive(s.conservation_x[i]);
    sc.conservation_label = sc.conservation_score >= s.config.classification_threshold ? 1 : 0;
    if (sc.conservation_label == 1 || !s.config.gate_infrastructure) infra_idx.push_back(i);
  }
  std::vector<Article> subset;
  for (std::size_t i : infra_idx) subset.push_back(articles[i]);
  const auto infra_x = s.infrastructure->features.featurize_all(subset);
  for (std::size_t n = 0; n < infra_idx.size(); ++n) {
    auto& sc = s.scores[infra_idx[n]];
    if (infra_x[n].size() != im.input_dim()) throw std::runtime_error("infrastructure feature dimension mismatch");
    sc.infrastructure_score = im.p_positive(infra_x[n]);
    sc.infrastructure_label = *sc.infrastructure_score >= s.config.infrastructure_threshold ? 1 : 0;
  }
  std::ostringstream csv;
  write_predictions(s.corpus, s.scores, csv);
  s.write_artifact("predictions.csv", csv.str());
  return infra_idx.size();
}

std::size_t stage_postprocess(RunState& s) {
  const auto dictionary = PhraseMatcher::load(s.config.dictionary);
  const auto gazetteer = Gazetteer::load(s.config.gazetteer);
  const auto& articles = s.corpus.articles();
  for (const auto& a : articles) s.keywords.emplace(a.id, extract_keywords(a, dictionary));
  EventOptions opts;
  opts.k = s.config.event_k;
  opts.lookback_weeks = s.config.event_lookback_weeks;
  for (std::size_t i = 0; i < articles.size(); ++i) {
    if (s.scores[i].conservation_label != 1 || !in_window(s.config, articles[i])) continue;
    const Article& a = articles[i];
    RelevantArticle r;
    r.article = &a;
    r.conservation_score = s.scores[i].conservation_score;
    r.infrastructure_score = s.scores[i].infrastructure_score;
    r.keywords = s.keywords.at(a.id);
    r.geo = geolocate(a, gazetteer);
    s.relevant.push_back(std::move(r));
    if (s.config.emit_events) {
      for (auto& e : events_for_anchor(articles, s.keywords, a, opts)) s.events.push_back(std::move(e));
    }
  }
  return s.relevant.size();
}

std::size_t stage_emit(RunState& s) {
  std::size_t files = 0;
  if (s.config.emit_events) {
    std::ostringstream out;
    write_events_json(out, s.events, s.corpus);
    s.write_artifact("events.json", out.str());
    ++files;
  }
  if (s.config.emit_geojson) {
    std::ostringstream geo, side;
    emit_geojson(geo, s.relevant);
    emit_unresolved_csv(side, s.relevant);
    s.write_artifact("sites.geojson", geo.str());
    s.write_artifact("unresolved.csv", side.str());
    files += 2;
  }
  if (s.config.emit_tweets) {
    std::vector<TweetDraft> drafts;
    for (const auto& r : s.relevant) drafts.push_back(compose_tweet(*r.article, r.keywords));
    std::ostringstream out;
    emit_tweets(out, drafts);
    s.write_artifact("tweets.txt", out.str());
    ++files;
  }
  return files;
}

}  // namespace

RunManifest run_pipeline(const PipelineConfig& config) {
  config.validate();
  std::filesystem::create_directories(config.output_dir);
  RunManifest manifest;
  manifest.run_date = config.run_date.str();
  manifest.seed = config.seed;
  manifest.config_sha256 = sha256_hex(config.canonical);
  for (const auto& [role, name] : config.input_names) {
    std::filesystem::path p;
    if (role == "corpus") p = config.corpus;
    else if (role == "gazetteer") p = config.gazetteer;
    else if (role == "dictionary") p = config.dictionary;
    else if (role == "conservation_model") p = config.conservation_model;
    else p = config.infrastructure_model;
    manifest.inputs.push_back({role, name, sha256_file(p.string())});
  }

  RunState state{config, manifest, {}, {}, {}, {}, {}, {}, {}, {}, {}};
  const std::vector<std::pair<const char*, std::function<std::size_t(RunState&)>>> stages = {
      {"load", stage_load},
      {"featurize", stage_featurize},
      {"classify", stage_classify},
      {"postprocess", stage_postprocess},
      {"emit", stage_emit}};
  for (const auto& [name, fn] : stages) {
    StageRecord rec{name, "skipped", 0, {}};
    if (manifest.ok()) {
      try {
        rec.items = fn(state);
        rec.status = "ok";
      } catch (const std::exception& e) {
        rec.status = "failed";
        rec.error = e.what();
        manifest.failed_stage = name;
      }
    }
    manifest.stages.push_back(std::move(rec));
  }

  std::ofstream out(config.output_dir / kManifestFile, std::ios::binary);
  out << manifest.to_json().dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write manifest in " + config.output_dir.string());
  return manifest;
}

}  // namespace sitewatch
