#include "sitewatch/model/classifier.hpp"

#include <cmath>
#include <stdexcept>

#include "sitewatch/util/rng.hpp"

namespace sitewatch {

std::string to_string(Architecture arch) { return arch == Architecture::linear ? "linear" : "mlp1"; }

Architecture parse_architecture(const std::string& text) {
  if (text == "linear") return Architecture::linear;
  if (text == "mlp1") return Architecture::mlp1;
  throw std::invalid_argument("unknown architecture '" + text + "'");
}

ClassifierHead::ClassifierHead(Architecture arch, std::size_t input_dim, std::size_t hidden)
    : arch_(arch), input_dim_(input_dim), hidden_(arch == Architecture::mlp1 ? hidden : 0) {
  if (input_dim == 0) throw std::invalid_argument("classifier input_dim must be >= 1");
  if (arch == Architecture::mlp1 && hidden == 0) throw std::invalid_argument("mlp1 needs hidden >= 1");
  const std::size_t n = arch == Architecture::linear
                            ? 2 * input_dim + 2
                            : hidden_ * input_dim + hidden_ + 2 * hidden_ + 2;
  params_.assign(n, 0.0);
}

void ClassifierHead::randomize(std::uint64_t seed, double scale) {
  Rng rng(seed);
  for (std::size_t i = 0; i < params_.size(); ++i) {
    params_[i] = is_weight(i) ? scale * (2.0 * rng.uniform() - 1.0) : 0.0;
  }
}

bool ClassifierHead::is_weight(std::size_t i) const {
  const std::size_t d = input_dim_;
  if (arch_ == Architecture::linear) return i < 2 * d;
  const std::size_t h = hidden_;
  const std::size_t w1_end = h * d;
  const std::size_t b1_end = w1_end + h;
  const std::size_t w2_end = b1_end + 2 * h;
  return i < w1_end || (i >= b1_end && i < w2_end);
}

Logits ClassifierHead::forward(std::span<const double> x) const {
  if (x.size() != input_dim_) throw std::invalid_argument("feature dimension mismatch");
  const std::size_t d = input_dim_;
  const double* p = params_.data();
  if (arch_ == Architecture::linear) {
    Logits z{p[2 * d], p[2 * d + 1]};
    for (std::size_t j = 0; j < d; ++j) {
      z[0] += p[j] * x[j];
      z[1] += p[d + j] * x[j];
    }
    return z;
  }
  const std::size_t h = hidden_;
  const double* w1 = p;
  const double* b1 = p + h * d;
  const double* w2 = b1 + h;
  const double* b2 = w2 + 2 * h;
  Logits z{b2[0], b2[1]};
  for (std::size_t u = 0; u < h; ++u) {
    double a = b1[u];
    for (std::size_t j = 0; j < d; ++j) a += w1[u * d + j] * x[j];
    const double act = std::tanh(a);
    z[0] += w2[u] * act;
    z[1] += w2[h + u] * act;
  }
  return z;
}

void ClassifierHead::backward(std::span<const double> x, const Logits& g,
                              std::span<double> grad) const {
  if (x.size() != input_dim_) throw std::invalid_argument("feature dimension mismatch");
  if (grad.size() != params_.size()) throw std::invalid_argument("gradient buffer size mismatch");
  const std::size_t d = input_dim_;
  if (arch_ == Architecture::linear) {
    for (std::size_t j = 0; j < d; ++j) {
      grad[j] += g[0] * x[j];
      grad[d + j] += g[1] * x[j];
    }
    grad[2 * d] += g[0];
    grad[2 * d + 1] += g[1];
    return;
  }
  const std::size_t h = hidden_;
  const double* p = params_.data();
  const double* w1 = p;
  const double* b1 = p + h * d;
  const double* w2 = b1 + h;
  double* gw1 = grad.data();
  double* gb1 = gw1 + h * d;
  double* gw2 = gb1 + h;
  double* gb2 = gw2 + 2 * h;
  for (std::size_t u = 0; u < h; ++u) {
    double a = b1[u];
    for (std::size_t j = 0; j < d; ++j) a += w1[u * d + j] * x[j];
    const double act = std::tanh(a);
    gw2[u] += g[0] * act;
    gw2[h + u] += g[1] * act;
    const double da = (g[0] * w2[u] + g[1] * w2[h + u]) * (1.0 - act * act);
    gb1[u] += da;
    for (std::size_t j = 0; j < d; ++j) gw1[u * d + j] += da * x[j];
  }
  gb2[0] += g[0];
  gb2[1] += g[1];
}

FeatureScaler FeatureScaler::fit(std::span<const std::vector<double>> rows, std::size_t dim) {
  FeatureScaler s;
  s.mean.assign(dim, 0.0);
  s.scale.assign(dim, 1.0);
  if (rows.empty()) return s;
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < dim; ++j) s.mean[j] += r[j] / n;
  }
  std::vector<double> var(dim, 0.0);
  for (const auto& r : rows) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double c = r[j] - s.mean[j];
      var[j] += c * c / n;
    }
  }
  for (std::size_t j = 0; j < dim; ++j) {
    const double sd = std::sqrt(var[j]);
    s.scale[j] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

std::vector<double> FeatureScaler::apply(std::span<const double> x) const {
  if (x.size() != mean.size()) throw std::invalid_argument("feature dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) / scale[j];
  return out;
}

}  // namespace sitewatch
