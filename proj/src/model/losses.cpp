#include "sitewatch/model/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sitewatch {

namespace {

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("logits and labels differ in length");
}

void check_label(int label) {
  if (label != 0 && label != 1) throw std::invalid_argument("label must be 0 or 1");
}

}  // namespace

std::array<double, 2> softmax(const Logits& z) {
  const double m = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - m);
  const double e1 = std::exp(z[1] - m);
  const double s = e0 + e1;
  return {e0 / s, e1 / s};
}

LossValue cross_entropy(const Logits& z, int label) {
  check_label(label);
  const double m = std::max(z[0], z[1]);
  const double lse = m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m));
  const auto p = softmax(z);
  LossValue out;
  out.loss = lse - z[label];
  out.grad = {p[0] - (label == 0 ? 1.0 : 0.0), p[1] - (label == 1 ? 1.0 : 0.0)};
  return out;
}

BatchLoss batch_cross_entropy(std::span<const Logits> logits, std::span<const int> labels) {
  check_sizes(logits.size(), labels.size());
  BatchLoss out;
  if (logits.empty()) return out;
  const double inv_b = 1.0 / static_cast<double>(logits.size());
  out.grad.resize(logits.size());
  for (std::size_t n = 0; n < logits.size(); ++n) {
    const auto ce = cross_entropy(logits[n], labels[n]);
    out.loss += ce.loss * inv_b;
    out.grad[n] = {ce.grad[0] * inv_b, ce.grad[1] * inv_b};
  }
  return out;
}

BatchLoss peer_loss(std::span<const Logits> logits, std::span<const int> labels,
                    std::span<const Logits> peer_logits, std::span<const int> peer_labels,
                    double alpha) {
  check_sizes(logits.size(), labels.size());
  check_sizes(logits.size(), peer_logits.size());
  check_sizes(logits.size(), peer_labels.size());
  BatchLoss out;
  if (logits.empty()) return out;
  const double inv_b = 1.0 / static_cast<double>(logits.size());
  out.grad.resize(logits.size());
  out.peer_grad.resize(logits.size());
  for (std::size_t n = 0; n < logits.size(); ++n) {
    const auto own = cross_entropy(logits[n], labels[n]);
    const auto peer = cross_entropy(peer_logits[n], peer_labels[n]);
    out.loss += (own.loss - alpha * peer.loss) * inv_b;
    out.grad[n] = {own.grad[0] * inv_b, own.grad[1] * inv_b};
    out.peer_grad[n] = {-alpha * peer.grad[0] * inv_b, -alpha * peer.grad[1] * inv_b};
  }
  return out;
}

NoisePrior estimate_noise_prior(std::span<const int> labels) {
  if (labels.empty()) throw std::invalid_argument("cannot estimate a noise prior from no labels");
  double ones = 0.0;
  for (int y : labels) {
    check_label(y);
    ones += y;
  }
  const double n = static_cast<double>(labels.size());
  NoisePrior prior;
  prior.p_hat = {(n - ones + 1.0) / (n + 2.0), (ones + 1.0) / (n + 2.0)};
  return prior;
}

BatchLoss cores_loss(std::span<const Logits> logits, std::span<const int> labels,
                     const NoisePrior& prior, double beta) {
  check_sizes(logits.size(), labels.size());
  BatchLoss out;
  if (logits.empty()) return out;
  const double inv_b = 1.0 / static_cast<double>(logits.size());
  out.grad.resize(logits.size());
  for (std::size_t n = 0; n < logits.size(); ++n) {
    const auto own = cross_entropy(logits[n], labels[n]);
    const auto ce0 = cross_entropy(logits[n], 0);
    const auto ce1 = cross_entropy(logits[n], 1);
    const double expected = prior.p_hat[0] * ce0.loss + prior.p_hat[1] * ce1.loss;
    out.loss += (own.loss - beta * expected) * inv_b;
    for (int j = 0; j < 2; ++j) {
      const double reg = prior.p_hat[0] * ce0.grad[j] + prior.p_hat[1] * ce1.grad[j];
      out.grad[n][j] = (own.grad[j] - beta * reg) * inv_b;
    }
  }
  return out;
}

}  // namespace sitewatch
