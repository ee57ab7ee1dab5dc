#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sitewatch/util/date.hpp"
#include "sitewatch/util/kvconfig.hpp"

namespace sitewatch {

// Weekly run settings, read from a flat key = value file. Relative paths are
// resolved against the config file's directory.
//
//   corpus, gazetteer, dictionary, conservation_model, infrastructure_model,
//   output_dir                 paths (all required)
//   run_date                   YYYY-MM-DD (required)
//   seed                       integer, default 0
//   classification_threshold   default 0.5
//   infrastructure_threshold   default 0.5
//   event_k                    default 3
//   event_lookback_weeks       default 0 (unlimited)
//   window_days                articles published in (run_date - n, run_date]
//                              are reported; default 7, 0 = all
//   emit_events, emit_geojson, emit_tweets   default true
//   gate_infrastructure        default true
struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path gazetteer;
  std::filesystem::path dictionary;
  std::filesystem::path conservation_model;
  std::filesystem::path infrastructure_model;
  std::filesystem::path output_dir;
  Date run_date;
  std::uint64_t seed = 0;
  double classification_threshold = 0.5;
  double infrastructure_threshold = 0.5;
  std::size_t event_k = 3;
  std::size_t event_lookback_weeks = 0;
  std::size_t window_days = 7;
  bool emit_events = true;
  bool emit_geojson = true;
  bool emit_tweets = true;
  bool gate_infrastructure = true;

  // Input paths exactly as written in the config, keyed by config key, in
  // key order; the manifest records these rather than absolute paths.
  std::vector<std::pair<std::string, std::string>> input_names;
  // Sorted key=value text of the file; its hash identifies the config.
  std::string canonical;

  static const std::set<std::string>& keys();
  static PipelineConfig from_config(const KvConfig& kv);
  static PipelineConfig load(const std::filesystem::path& path);

  // Throws if a referenced input is missing or a value is out of range.
  void validate() const;
};

}  // namespace sitewatch
