#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "sitewatch/model/checkpoint.hpp"
#include "sitewatch/model/losses.hpp"
#include "sitewatch/model/trainer.hpp"
#include "sitewatch/util/rng.hpp"

using namespace sitewatch;

namespace {

double relative_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-12});
  return std::abs(a - b) / scale;
}

std::vector<Logits> random_logits(Rng& rng, std::size_t n) {
  std::vector<Logits> out(n);
  for (auto& l : out) l = {rng.uniform() * 8 - 4, rng.uniform() * 8 - 4};
  return out;
}

std::vector<int> random_labels(Rng& rng, std::size_t n) {
  std::vector<int> out(n);
  for (auto& y : out) y = static_cast<int>(rng.below(2));
  return out;
}

// Central differences of f over every logit entry.
template <typename F>
double max_fd_error(std::vector<Logits> logits, const std::vector<Logits>& analytic, F&& f) {
  constexpr double h = 1e-5;
  double worst = 0.0;
  for (std::size_t n = 0; n < logits.size(); ++n) {
    for (int j = 0; j < 2; ++j) {
      const double keep = logits[n][j];
      logits[n][j] = keep + h;
      const double up = f(logits);
      logits[n][j] = keep - h;
      const double down = f(logits);
      logits[n][j] = keep;
      worst = std::max(worst, relative_error((up - down) / (2 * h), analytic[n][j]));
    }
  }
  return worst;
}

// Two Gaussian blobs far apart.
void separable(std::size_t n, std::uint64_t seed, FeatureMatrix& x, std::vector<int>& y) {
  Rng rng(seed);
  x.clear();
  y.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const int label = rng.bernoulli(0.3);
    FeatureRow row(6);
    for (auto& v : row) v = (rng.uniform() - 0.5) + (label ? 1.5 : -1.5) * (&v == &row[0]);
    x.push_back(row);
    y.push_back(label);
  }
}

}  // namespace

TEST_CASE("cross-entropy closed forms") {
  CHECK(cross_entropy({0, 0}, 1).loss == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(cross_entropy({0, 20}, 1).loss < 1e-8);
  const auto big = cross_entropy({800, -800}, 1);
  CHECK(std::isfinite(big.loss));
  CHECK(big.loss == doctest::Approx(1600));
  const auto p = softmax({1000, 999});
  CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS(cross_entropy({0, 0}, 2));
}

TEST_CASE("loss gradients match central differences") {
  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(6);
    const auto logits = random_logits(rng, n);
    const auto peer = random_logits(rng, n);
    const auto labels = random_labels(rng, n);
    const auto peer_labels = random_labels(rng, n);
    NoisePrior prior;
    prior.p_hat[1] = 0.05 + 0.9 * rng.uniform();
    prior.p_hat[0] = 1 - prior.p_hat[1];

    const auto ce = batch_cross_entropy(logits, labels);
    CHECK(max_fd_error(logits, ce.grad, [&](const std::vector<Logits>& l) {
            return batch_cross_entropy(l, labels).loss;
          }) < 1e-6);

    const auto pl = peer_loss(logits, labels, peer, peer_labels, 0.3);
    CHECK(max_fd_error(logits, pl.grad, [&](const std::vector<Logits>& l) {
            return peer_loss(l, labels, peer, peer_labels, 0.3).loss;
          }) < 1e-6);
    CHECK(max_fd_error(peer, pl.peer_grad, [&](const std::vector<Logits>& l) {
            return peer_loss(logits, labels, l, peer_labels, 0.3).loss;
          }) < 1e-6);

    const auto cl = cores_loss(logits, labels, prior, 0.4);
    CHECK(max_fd_error(logits, cl.grad, [&](const std::vector<Logits>& l) {
            return cores_loss(l, labels, prior, 0.4).loss;
          }) < 1e-6);
  }
}

TEST_CASE("correction terms vanish at zero weight") {
  Rng rng(7);
  const auto logits = random_logits(rng, 5);
  const auto peer = random_logits(rng, 5);
  const auto labels = random_labels(rng, 5);
  const auto peer_labels = random_labels(rng, 5);
  const double ce = batch_cross_entropy(logits, labels).loss;
  CHECK(peer_loss(logits, labels, peer, peer_labels, 0.0).loss == ce);
  CHECK(cores_loss(logits, labels, NoisePrior{{0.3, 0.7}}, 0.0).loss == ce);
  // Peer drawn as the example itself with alpha = 1 cancels exactly.
  CHECK(peer_loss(logits, labels, logits, labels, 1.0).loss == 0.0);
}

TEST_CASE("cores closed form under a uniform prior") {
  const Logits l{0, 0};
  const int y = 1;
  const auto r = cores_loss(std::span<const Logits>(&l, 1), std::span<const int>(&y, 1), NoisePrior{}, 0.05);
  CHECK(r.loss == doctest::Approx(0.95 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("noise prior uses add-one smoothing") {
  const std::vector<int> a{1, 1, 1, 0};
  CHECK(estimate_noise_prior(a).p_hat[0] == doctest::Approx(2.0 / 6));
  CHECK(estimate_noise_prior(a).p_hat[1] == doctest::Approx(4.0 / 6));
  const std::vector<int> ones(8, 1);
  CHECK(estimate_noise_prior(ones).p_hat[0] == doctest::Approx(0.1));
  const std::vector<int> balanced{0, 1, 0, 1};
  CHECK(estimate_noise_prior(balanced).p_hat[1] == 0.5);
  CHECK_THROWS(estimate_noise_prior(std::vector<int>{}));
}

TEST_CASE("head backward matches finite differences") {
  for (auto arch : {Architecture::linear, Architecture::mlp1}) {
    ClassifierHead head(arch, 5, 7);
    head.randomize(3, 0.5);
    Rng rng(9);
    std::vector<double> x(5);
    for (auto& v : x) v = rng.uniform() * 2 - 1;
    const Logits dl{0.3, -0.8};
    std::vector<double> grad(head.params().size(), 0.0);
    head.backward(x, dl, grad);
    auto objective = [&] {
      const auto z = head.forward(x);
      return dl[0] * z[0] + dl[1] * z[1];
    };
    for (std::size_t i = 0; i < grad.size(); ++i) {
      const double keep = head.params()[i];
      head.params()[i] = keep + 1e-5;
      const double up = objective();
      head.params()[i] = keep - 1e-5;
      const double down = objective();
      head.params()[i] = keep;
      CHECK(relative_error((up - down) / 2e-5, grad[i]) < 1e-6);
    }
    const auto p = head.predict_proba(x);
    CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("scaler standardizes and keeps constant features") {
  const std::vector<std::vector<double>> rows{{1, 5}, {3, 5}};
  const auto s = FeatureScaler::fit(rows, 2);
  CHECK(s.mean == std::vector<double>{2, 5});
  CHECK(s.scale[1] == 1.0);
  const auto z = s.apply(rows[0]);
  CHECK(z[0] == doctest::Approx(-1.0));
  CHECK(z[1] == 0.0);
}

TEST_CASE("training config validation") {
  TrainingConfig c;
  c.epochs = 0;
  CHECK_THROWS_WITH(c.validate(), doctest::Contains("no checkpoint"));
  c = {};
  c.loss = LossKind::peer;
  c.alpha = 0;
  CHECK_THROWS(c.validate());
  c = {};
  c.loss = LossKind::cores;
  c.beta = -1;
  CHECK_THROWS(c.validate());
  CHECK(parse_loss("cores") == LossKind::cores);
  CHECK_THROWS(parse_loss("mse"));
}

TEST_CASE("stratified split holds out a share of each class") {
  std::vector<int> y(50, 0);
  for (int i = 0; i < 10; ++i) y[i * 5] = 1;
  const auto [train_idx, val_idx] = stratified_split(y, 0.2, 1);
  CHECK(train_idx.size() + val_idx.size() == 50);
  int val_pos = 0;
  for (auto i : val_idx) val_pos += y[i];
  CHECK(val_pos == 2);
  CHECK(val_idx.size() == 10);
}

TEST_CASE("training on separable data") {
  FeatureMatrix x;
  std::vector<int> y;
  separable(400, 5, x, y);
  for (auto arch : {Architecture::linear, Architecture::mlp1}) {
    TrainingConfig cfg;
    cfg.architecture = arch;
    cfg.hidden = 8;
    cfg.seed = 3;
    const auto m = train(x, y, cfg);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < x.size(); ++i) correct += (m.p_positive(x[i]) >= 0.5) == (y[i] == 1);
    CHECK(static_cast<double>(correct) / x.size() >= 0.98);
    CHECK(m.history.size() == cfg.epochs);
    CHECK(m.history.back().train_ce < m.initial_train_ce);
    CHECK(m.best_epoch >= 1);
    CHECK(m.best_validation_f1 == m.history[m.best_epoch - 1].validation_f1);
    for (const auto& r : m.history) CHECK(r.validation_f1 <= m.best_validation_f1);
  }
}

TEST_CASE("training is deterministic for every loss") {
  FeatureMatrix x;
  std::vector<int> y;
  separable(120, 8, x, y);
  for (auto loss : {LossKind::ce, LossKind::peer, LossKind::cores}) {
    TrainingConfig cfg;
    cfg.loss = loss;
    cfg.seed = 11;
    cfg.epochs = 5;
    const auto a = train(x, y, cfg);
    const auto b = train(x, y, cfg);
    CHECK(a.head.params() == b.head.params());
    cfg.seed = 12;
    CHECK(train(x, y, cfg).head.params() != a.head.params());
  }
}

TEST_CASE("single-class training data names the missing class") {
  const FeatureMatrix x(10, FeatureRow{1.0, 2.0});
  const std::vector<int> zeros(10, 0), ones(10, 1);
  CHECK_THROWS_WITH(train(x, zeros, {}), doctest::Contains("class 1 (relevant)"));
  CHECK_THROWS_WITH(train(x, ones, {}), doctest::Contains("class 0 (irrelevant)"));
}

TEST_CASE("predictions") {
  TrainedModel zero;
  zero.head = ClassifierHead(Architecture::linear, 3);
  zero.scaler.mean = {0, 0, 0};
  zero.scaler.scale = {1, 1, 1};
  const FeatureMatrix x{{1, 2, 3}, {-4, 0, 9}};
  const std::vector<std::string> ids{"a", "b"};
  for (const auto& p : predict(zero, x, ids)) {
    CHECK(p.p_positive == 0.5);
    CHECK(p.confidence == 0.0);
    CHECK(p.label == 1);
  }
  CHECK_THROWS(predict(zero, FeatureMatrix{{1, 2}}, std::vector<std::string>{"a"}));

  FeatureMatrix tx;
  std::vector<int> ty;
  separable(100, 2, tx, ty);
  TrainingConfig cfg;
  cfg.epochs = 3;
  const auto m = train(tx, ty, cfg);
  std::vector<std::string> tid(tx.size(), "x");
  const auto p = predict(m, tx, tid, 0.7);
  CHECK(p.size() == tx.size());
  for (const auto& q : p) {
    CHECK(q.confidence == doctest::Approx(std::abs(q.p_positive - 0.5)));
    CHECK(q.label == (q.p_positive >= 0.7 ? 1 : 0));
  }
}

TEST_CASE("model checkpoint round trip is exact") {
  FeatureMatrix x;
  std::vector<int> y;
  separable(80, 4, x, y);
  for (auto arch : {Architecture::linear, Architecture::mlp1}) {
    TrainingConfig cfg;
    cfg.architecture = arch;
    cfg.hidden = 4;
    cfg.loss = LossKind::cores;
    cfg.epochs = 3;
    const auto m = train(x, y, cfg);
    std::stringstream s;
    write_model(s, m);
    const auto back = read_model(s);
    CHECK(back.head == m.head);
    CHECK(back.scaler == m.scaler);
    CHECK(back.config.loss == LossKind::cores);
    CHECK(back.best_epoch == m.best_epoch);
    CHECK(back.history.size() == m.history.size());
    for (const auto& row : x) CHECK(back.p_positive(row) == m.p_positive(row));
  }
  std::istringstream junk("not a model");
  CHECK_THROWS(read_model(junk));
}
