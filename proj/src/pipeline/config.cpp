#include "sitewatch/pipeline/config.hpp"

#include <stdexcept>

namespace sitewatch {

const std::set<std::string>& PipelineConfig::keys() {
  static const std::set<std::string> k = {
      "corpus",         "gazetteer",   "dictionary",  "conservation_model", "infrastructure_model",
      "output_dir",     "run_date",    "seed",        "classification_threshold",
      "infrastructure_threshold",      "event_k",     "event_lookback_weeks", "window_days",
      "emit_events",    "emit_geojson", "emit_tweets", "gate_infrastructure"};
  return k;
}

PipelineConfig PipelineConfig::from_config(const KvConfig& kv) {
  auto path = [&](const char* key) {
    auto p = kv.get_path(key);
    if (!p) throw std::invalid_argument(std::string("config is missing required key '") + key + "'");
    return *p;
  };
  auto count = [&](const char* key, long long fallback) {
    const long long v = kv.get_int(key, fallback);
    if (v < 0) throw std::invalid_argument(std::string(key) + " must be >= 0");
    return static_cast<std::size_t>(v);
  };
  PipelineConfig c;
  c.corpus = path("corpus");
  c.gazetteer = path("gazetteer");
  c.dictionary = path("dictionary");
  c.conservation_model = path("conservation_model");
  c.infrastructure_model = path("infrastructure_model");
  c.output_dir = path("output_dir");
  const auto date = kv.get("run_date");
  if (!date) throw std::invalid_argument("config is missing required key 'run_date'");
  c.run_date = Date::parse(*date);
  c.seed = static_cast<std::uint64_t>(kv.get_int("seed", 0));
  c.classification_threshold = kv.get_double("classification_threshold", c.classification_threshold);
  c.infrastructure_threshold = kv.get_double("infrastructure_threshold", c.infrastructure_threshold);
  c.event_k = count("event_k", 3);
  c.event_lookback_weeks = count("event_lookback_weeks", 0);
  c.window_days = count("window_days", 7);
  c.emit_events = kv.get_bool("emit_events", true);
  c.emit_geojson = kv.get_bool("emit_geojson", true);
  c.emit_tweets = kv.get_bool("emit_tweets", true);
  c.gate_infrastructure = kv.get_bool("gate_infrastructure", true);
  for (const char* key : {"conservation_model", "corpus", "dictionary", "gazetteer", "infrastructure_model"}) {
    c.input_names.emplace_back(key, *kv.get(key));
  }
  c.canonical = kv.canonical();
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  return from_config(KvConfig::load(path, keys()));
}

void PipelineConfig::validate() const {
  for (const auto* p : {&corpus, &gazetteer, &dictionary, &conservation_model, &infrastructure_model}) {
    if (!std::filesystem::exists(*p)) throw std::invalid_argument("input not found: " + p->string());
  }
  for (double t : {classification_threshold, infrastructure_threshold}) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("thresholds must lie in [0, 1]");
  }
  if (event_k == 0) throw std::invalid_argument("event_k must be >= 1");
}

}  // namespace sitewatch
