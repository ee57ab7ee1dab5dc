#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "sitewatch/pipeline/config.hpp"

namespace sitewatch {

struct StageRecord {
  std::string name;    // load, featurize, classify, postprocess, emit
  std::string status;  // ok, failed, skipped
  std::size_t items = 0;
  std::string error;
};

struct ArtifactRecord {
  std::string path;  // relative to output_dir
  std::string sha256;
  std::size_t bytes = 0;
};

struct InputRecord {
  std::string role;  // config key
  std::string path;  // as written in the config
  std::string sha256;
};

struct RunManifest {
  std::string run_date;
  std::uint64_t seed = 0;
  std::string config_sha256;
  std::vector<InputRecord> inputs;
  std::vector<StageRecord> stages;
  std::vector<ArtifactRecord> artifacts;
  std::string failed_stage;  // empty on success

  bool ok() const { return failed_stage.empty(); }
  nlohmann::ordered_json to_json() const;
};

inline constexpr const char* kManifestFile = "manifest.json";

// load -> featurize -> classify -> postprocess -> emit. Artifacts written
// by completed stages are kept when a later stage fails; the manifest is
// always written to <output_dir>/manifest.json. Exceptions from config
// validation propagate before any stage starts.
RunManifest run_pipeline(const PipelineConfig& config);

}  // namespace sitewatch
