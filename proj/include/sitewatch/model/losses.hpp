#pragma once

#include <array>
#include <span>
#include <vector>

namespace sitewatch {

using Logits = std::array<double, 2>;

// Numerically stable two-class softmax.
std::array<double, 2> softmax(const Logits& logits);

struct LossValue {
  double loss = 0.0;
  Logits grad{};  // d loss / d logits
};

// -ln softmax(logits)[label]; gradient softmax - onehot(label).
LossValue cross_entropy(const Logits& logits, int label);

struct BatchLoss {
  double loss = 0.0;                // mean over the batch
  std::vector<Logits> grad;         // per example, already divided by the batch size
  std::vector<Logits> peer_grad;    // peer loss only: gradient wrt the peer logits
};

BatchLoss batch_cross_entropy(std::span<const Logits> logits, std::span<const int> labels);

// Per example: ce(f(x_n), y_n) - alpha * ce(f(x_n1), y_n2), where the peer
// input x_n1 and peer label y_n2 were drawn independently by the caller.
// Gradient flows into both the example logits and the peer logits.
BatchLoss peer_loss(std::span<const Logits> logits, std::span<const int> labels,
                    std::span<const Logits> peer_logits, std::span<const int> peer_labels,
                    double alpha);

// Estimated marginal of the noisy labels.
struct NoisePrior {
  std::array<double, 2> p_hat{0.5, 0.5};
};

// (count_y + 1) / (N + 2). Throws on an empty label set.
NoisePrior estimate_noise_prior(std::span<const int> labels);

// Per example: ce(f(x_n), y_n) - beta * sum_y p_hat[y] * ce(f(x_n), y).
BatchLoss cores_loss(std::span<const Logits> logits, std::span<const int> labels,
                     const NoisePrior& prior, double beta);

}  // namespace sitewatch
