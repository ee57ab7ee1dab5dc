#include "sitewatch/model/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sitewatch/eval/metrics.hpp"
#include "sitewatch/util/rng.hpp"

namespace sitewatch {

std::string to_string(LossKind loss) {
  switch (loss) {
    case LossKind::ce: return "ce";
    case LossKind::peer: return "peer";
    case LossKind::cores: return "cores";
  }
  return "ce";
}

LossKind parse_loss(const std::string& text) {
  if (text == "ce") return LossKind::ce;
  if (text == "peer") return LossKind::peer;
  if (text == "cores") return LossKind::cores;
  throw std::invalid_argument("unknown loss '" + text + "' (expected ce, peer or cores)");
}

void TrainingConfig::validate() const {
  if (loss == LossKind::peer && !(alpha > 0.0)) throw std::invalid_argument("peer loss needs alpha > 0");
  if (loss == LossKind::cores && !(beta > 0.0)) throw std::invalid_argument("cores loss needs beta > 0");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be >= 1");
  if (epochs == 0) throw std::invalid_argument("epochs must be >= 1 (no checkpoint exists otherwise)");
  if (!(l2 >= 0.0)) throw std::invalid_argument("l2 must be >= 0");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw std::invalid_argument("validation_fraction must lie in (0, 1)");
  }
  if (architecture == Architecture::mlp1 && hidden == 0) throw std::invalid_argument("hidden must be >= 1");
}

double TrainedModel::p_positive(std::span<const double> row) const {
  const auto x = scaler.apply(row);
  return head.predict_proba(x)[1];
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const int> labels, double validation_fraction, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 101));
  std::vector<std::size_t> train_idx, val_idx;
  for (int cls = 0; cls <= 1; ++cls) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) members.push_back(i);
    }
    rng.shuffle(members);
    auto n_val = static_cast<std::size_t>(std::llround(validation_fraction * static_cast<double>(members.size())));
    if (members.size() >= 2) n_val = std::clamp<std::size_t>(n_val, 1, members.size() - 1);
    else n_val = 0;
    val_idx.insert(val_idx.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_val));
    train_idx.insert(train_idx.end(), members.begin() + static_cast<std::ptrdiff_t>(n_val), members.end());
  }
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(val_idx.begin(), val_idx.end());
  return {std::move(train_idx), std::move(val_idx)};
}

namespace {

double mean_ce(const ClassifierHead& head, const FeatureMatrix& x, std::span<const int> y,
               const std::vector<std::size_t>& idx) {
  double total = 0.0;
  for (std::size_t i : idx) total += cross_entropy(head.forward(x[i]), y[i]).loss;
  return idx.empty() ? 0.0 : total / static_cast<double>(idx.size());
}

double f1_on(const ClassifierHead& head, const FeatureMatrix& x, std::span<const int> y,
             const std::vector<std::size_t>& idx) {
  if (idx.empty()) return 0.0;
  std::vector<int> pred, gold;
  for (std::size_t i : idx) {
    pred.push_back(head.predict_proba(x[i])[1] >= 0.5 ? 1 : 0);
    gold.push_back(y[i]);
  }
  return compute_metrics(pred, gold).f1;
}

}  // namespace

TrainedModel train(const FeatureMatrix& features, std::span<const int> labels,
                   const TrainingConfig& config) {
  config.validate();
  if (features.empty()) throw std::invalid_argument("no training features");
  if (features.size() != labels.size()) throw std::invalid_argument("features and labels differ in length");
  const std::size_t dim = features.front().size();
  for (const auto& row : features) {
    if (row.size() != dim) throw std::invalid_argument("ragged feature matrix");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) throw std::invalid_argument("labels must be 0 or 1");
  }

  auto [train_idx, val_idx] = stratified_split(labels, config.validation_fraction, config.seed);
  bool has[2] = {false, false};
  for (std::size_t i : train_idx) has[labels[i]] = true;
  if (!has[0]) throw std::invalid_argument("training split has no examples of class 0 (irrelevant)");
  if (!has[1]) throw std::invalid_argument("training split has no examples of class 1 (relevant)");

  TrainedModel model;
  model.config = config;
  std::vector<std::vector<double>> train_rows;
  for (std::size_t i : train_idx) train_rows.push_back(features[i]);
  model.scaler = FeatureScaler::fit(train_rows, dim);
  FeatureMatrix x(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) x[i] = model.scaler.apply(features[i]);

  std::vector<int> train_labels;
  for (std::size_t i : train_idx) train_labels.push_back(labels[i]);
  model.prior = estimate_noise_prior(train_labels);

  ClassifierHead head(config.architecture, dim, config.hidden);
  if (config.architecture == Architecture::mlp1) head.randomize(mix_seed(config.seed, 202));
  model.head = head;
  model.initial_train_ce = mean_ce(head, x, labels, train_idx);
  // Selection metric falls back to the training split if nothing was held out.
  const std::vector<std::size_t>& select_idx = val_idx.empty() ? train_idx : val_idx;
  double best_f1 = -1.0;

  Rng order_rng(mix_seed(config.seed, 303));
  Rng peer_rng(mix_seed(config.seed, 404));
  std::vector<double> grad(head.params().size());
  std::vector<std::size_t> order = train_idx;
  std::vector<Logits> logits, peer_logits;
  std::vector<int> batch_labels, peer_labels;
  std::vector<std::size_t> peer_inputs;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    order_rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const std::size_t b = end - start;
      logits.resize(b);
      batch_labels.resize(b);
      for (std::size_t n = 0; n < b; ++n) {
        logits[n] = head.forward(x[order[start + n]]);
        batch_labels[n] = labels[order[start + n]];
      }
      BatchLoss loss;
      switch (config.loss) {
        case LossKind::ce:
          loss = batch_cross_entropy(logits, batch_labels);
          break;
        case LossKind::cores:
          loss = cores_loss(logits, batch_labels, model.prior, config.beta);
          break;
        case LossKind::peer: {
          peer_logits.resize(b);
          peer_labels.resize(b);
          peer_inputs.resize(b);
          for (std::size_t n = 0; n < b; ++n) {
            peer_inputs[n] = train_idx[peer_rng.below(train_idx.size())];
            peer_labels[n] = labels[train_idx[peer_rng.below(train_idx.size())]];
            peer_logits[n] = head.forward(x[peer_inputs[n]]);
          }
          loss = peer_loss(logits, batch_labels, peer_logits, peer_labels, config.alpha);
          break;
        }
      }
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t n = 0; n < b; ++n) head.backward(x[order[start + n]], loss.grad[n], grad);
      for (std::size_t n = 0; n < loss.peer_grad.size(); ++n) {
        head.backward(x[peer_inputs[n]], loss.peer_grad[n], grad);
      }
      auto& params = head.params();
      for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grad[i] + (head.is_weight(i) ? config.l2 * params[i] : 0.0);
        params[i] -= config.learning_rate * g;
      }
    }
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_ce = mean_ce(head, x, labels, train_idx);
    rec.validation_f1 = f1_on(head, x, labels, select_idx);
    model.history.push_back(rec);
    if (rec.validation_f1 > best_f1) {
      best_f1 = rec.validation_f1;
      model.best_epoch = epoch;
      model.best_validation_f1 = rec.validation_f1;
      model.head = head;
    }
  }
  return model;
}

std::vector<Prediction> predict(const TrainedModel& model, const FeatureMatrix& features,
                                std::span<const std::string> ids, double threshold) {
  if (features.size() != ids.size()) throw std::invalid_argument("features and ids differ in length");
  std::vector<Prediction> out;
  out.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].size() != model.input_dim()) {
      throw std::invalid_argument("feature dimension " + std::to_string(features[i].size()) +
                                  " does not match model input_dim " +
                                  std::to_string(model.input_dim()));
    }
    Prediction p;
    p.article_id = ids[i];
    p.p_positive = model.p_positive(features[i]);
    p.label = p.p_positive >= threshold ? 1 : 0;
    p.confidence = std::abs(p.p_positive - 0.5);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace sitewatch
