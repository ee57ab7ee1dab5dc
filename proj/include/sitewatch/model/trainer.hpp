#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sitewatch/features/features.hpp"
#include "sitewatch/model/classifier.hpp"
#include "sitewatch/model/losses.hpp"

namespace sitewatch {

enum class LossKind { ce, peer, cores };

std::string to_string(LossKind loss);
LossKind parse_loss(const std::string& text);

struct TrainingConfig {
  LossKind loss = LossKind::ce;
  double alpha = 0.05;  // peer weight
  double beta = 0.05;   // confidence-regularizer weight
  double learning_rate = 1e-2;
  std::size_t batch_size = 16;
  std::size_t epochs = 20;
  std::uint64_t seed = 0;
  double l2 = 1e-4;
  Architecture architecture = Architecture::linear;
  std::size_t hidden = 64;
  double validation_fraction = 0.2;

  // Throws std::invalid_argument describing the first bad field.
  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;       // 1-based
  double train_ce = 0.0;       // mean cross-entropy on the training split after the epoch
  double validation_f1 = 0.0;  // against the (possibly noisy) validation labels
};

struct TrainedModel {
  FeatureScaler scaler;
  ClassifierHead head;
  TrainingConfig config;
  NoisePrior prior;
  std::size_t best_epoch = 0;
  double best_validation_f1 = 0.0;
  double initial_train_ce = 0.0;
  std::vector<EpochRecord> history;

  std::size_t input_dim() const { return head.input_dim(); }
  // Softmax probability of the positive class for an unscaled feature row.
  double p_positive(std::span<const double> row) const;
};

// Stratified, seeded train/validation split: a `validation_fraction` share
// of each class is held out. Returns (train indices, validation indices).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const int> labels, double validation_fraction, std::uint64_t seed);

// Minibatch gradient descent with L2 on weights. After every epoch the
// validation F1 is measured and the best epoch's parameters are returned
// (ties keep the earlier epoch). Deterministic for a fixed config.
TrainedModel train(const FeatureMatrix& features, std::span<const int> labels,
                   const TrainingConfig& config);

struct Prediction {
  std::string article_id;
  double p_positive = 0.5;
  int label = 0;            // p_positive >= threshold
  double confidence = 0.0;  // |p_positive - 0.5|
};

std::vector<Prediction> predict(const TrainedModel& model, const FeatureMatrix& features,
                                std::span<const std::string> ids, double threshold = 0.5);

}  // namespace sitewatch
