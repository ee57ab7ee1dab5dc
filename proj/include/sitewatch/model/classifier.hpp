#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sitewatch/model/losses.hpp"

namespace sitewatch {

enum class Architecture { linear, mlp1 };

std::string to_string(Architecture arch);
Architecture parse_architecture(const std::string& text);

// Two-logit head over a feature row.
//   linear: logits = W x + b
//   mlp1:   logits = W2 tanh(W1 x + b1) + b2
// Parameters live in one flat vector: linear [W (2 x D), b (2)],
// mlp1 [W1 (H x D), b1 (H), W2 (2 x H), b2 (2)].
class ClassifierHead {
 public:
  ClassifierHead() = default;
  ClassifierHead(Architecture arch, std::size_t input_dim, std::size_t hidden = 64);

  // Small seeded random weights; mlp1 needs them to break symmetry.
  void randomize(std::uint64_t seed, double scale = 0.1);

  Logits forward(std::span<const double> x) const;
  // Accumulates d loss / d params into `grad` given d loss / d logits.
  void backward(std::span<const double> x, const Logits& dlogits, std::span<double> grad) const;

  std::array<double, 2> predict_proba(std::span<const double> x) const {
    return softmax(forward(x));
  }

  Architecture architecture() const { return arch_; }
  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden() const { return hidden_; }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }
  // True for weight entries (L2 applies), false for biases.
  bool is_weight(std::size_t index) const;

  friend bool operator==(const ClassifierHead&, const ClassifierHead&) = default;

 private:
  Architecture arch_ = Architecture::linear;
  std::size_t input_dim_ = 0;
  std::size_t hidden_ = 0;
  std::vector<double> params_;
};

// Per-feature standardization fitted on training rows. Zero-variance
// features keep scale 1.
struct FeatureScaler {
  std::vector<double> mean;
  std::vector<double> scale;

  static FeatureScaler fit(std::span<const std::vector<double>> rows, std::size_t dim);
  std::vector<double> apply(std::span<const double> x) const;

  friend bool operator==(const FeatureScaler&, const FeatureScaler&) = default;
};

}  // namespace sitewatch
