#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "sitewatch/features/features.hpp"
#include "sitewatch/model/trainer.hpp"

namespace sitewatch {

// Plain-text model checkpoint: architecture descriptor, dimensions, loss
// regime and hyperparameters, seed, scaler rows, then parameter values.
// Doubles are written with 17 significant digits so reads are exact.
void write_model(std::ostream& out, const TrainedModel& model);
TrainedModel read_model(std::istream& in);

// A classifier together with the feature space it was trained on, so raw
// articles can be scored without refitting anything.
struct ModelBundle {
  std::string target;  // "conservation" or "infrastructure"
  FeatureSpace features;
  TrainedModel model;
};

void save_bundle(const std::filesystem::path& path, const ModelBundle& bundle);
ModelBundle load_bundle(const std::filesystem::path& path);

}  // namespace sitewatch
