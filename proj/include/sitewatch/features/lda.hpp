#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace sitewatch {

struct LdaOptions {
  std::size_t topics = 50;
  std::optional<double> alpha;  // doc-topic prior, default 1/K
  std::optional<double> beta;   // topic-word prior, default 1/K
  std::size_t iterations = 200;
  std::uint64_t seed = 0;
};

// Topic-word counts of a collapsed Gibbs LDA fit.
class TopicModel {
 public:
  std::size_t topic_count() const { return topics_; }
  std::size_t vocab_size() const { return vocab_.size(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  std::size_t iterations() const { return iterations_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<std::string>& vocabulary() const { return vocab_; }

  std::int64_t count(std::size_t topic, std::size_t word) const {
    return counts_[topic * vocab_.size() + word];
  }
  std::int64_t topic_total(std::size_t topic) const { return totals_[topic]; }
  std::int64_t total_count() const;

  // (n_kw + beta) / (n_k + V * beta)
  std::vector<double> topic_word_distribution(std::size_t topic) const;
  // Vocabulary indices of the `n` highest-count words of a topic (ties by index).
  std::vector<std::size_t> top_words(std::size_t topic, std::size_t n) const;

  static constexpr std::size_t kFoldInSweeps = 50;

  // Fold-in Gibbs with the topic-word counts frozen. Unknown tokens are
  // ignored; with no known token the result is uniform. Returns
  // (n_k + alpha) / (n + K * alpha).
  std::vector<double> infer(const std::vector<std::string>& tokens, std::uint64_t seed,
                            std::size_t sweeps = kFoldInSweeps) const;

  // Text checkpoint: header line with K, V, alpha, beta, iterations, seed;
  // V vocabulary lines; K rows of V counts.
  void write(std::ostream& out) const;
  static TopicModel read(std::istream& in);

  friend bool operator==(const TopicModel&, const TopicModel&);

 private:
  friend class LdaSampler;

  std::size_t topics_ = 0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::size_t iterations_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::int64_t> counts_;  // K x V, row-major
  std::vector<std::int64_t> totals_;  // K
};

// Called after every sweep with the current counts.
using SweepObserver = std::function<void(std::size_t sweep, const TopicModel& state)>;

// Collapsed Gibbs sampling over token-topic assignments. Documents are swept
// in order, tokens in order; deterministic for a fixed seed.
TopicModel fit_lda(const std::vector<std::vector<std::string>>& documents, const LdaOptions& options,
                   const SweepObserver& observer = {});

}  // namespace sitewatch
