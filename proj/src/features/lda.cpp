#include "sitewatch/features/lda.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

#include "sitewatch/util/rng.hpp"

namespace sitewatch {

namespace {

std::size_t sample_discrete(const std::vector<double>& weights, double total, Rng& rng) {
  double u = rng.uniform() * total;
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    u -= weights[k];
    if (u < 0.0) return k;
  }
  return weights.size() - 1;
}

}  // namespace

std::int64_t TopicModel::total_count() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

std::vector<double> TopicModel::topic_word_distribution(std::size_t topic) const {
  const std::size_t v = vocab_.size();
  std::vector<double> out(v);
  const double denom = static_cast<double>(totals_.at(topic)) + static_cast<double>(v) * beta_;
  for (std::size_t w = 0; w < v; ++w) out[w] = (static_cast<double>(count(topic, w)) + beta_) / denom;
  return out;
}

std::vector<std::size_t> TopicModel::top_words(std::size_t topic, std::size_t n) const {
  std::vector<std::size_t> ids(vocab_.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::stable_sort(ids.begin(), ids.end(),
                   [&](std::size_t a, std::size_t b) { return count(topic, a) > count(topic, b); });
  ids.resize(std::min(n, ids.size()));
  return ids;
}

std::vector<double> TopicModel::infer(const std::vector<std::string>& tokens, std::uint64_t seed,
                                      std::size_t sweeps) const {
  const std::size_t k_count = topics_;
  std::vector<std::size_t> words;
  for (const auto& t : tokens) {
    auto it = index_.find(t);
    if (it != index_.end()) words.push_back(it->second);
  }
  std::vector<double> out(k_count, 1.0 / static_cast<double>(k_count));
  if (words.empty()) return out;

  Rng rng(seed);
  std::vector<std::int64_t> doc_counts(k_count, 0);
  std::vector<std::size_t> z(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    z[i] = rng.below(k_count);
    ++doc_counts[z[i]];
  }
  const double vbeta = static_cast<double>(vocab_.size()) * beta_;
  std::vector<double> inv_denom(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    inv_denom[k] = 1.0 / (static_cast<double>(totals_[k]) + vbeta);
  }
  std::vector<double> weights(k_count);
  for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t i = 0; i < words.size(); ++i) {
      --doc_counts[z[i]];
      double total = 0.0;
      for (std::size_t k = 0; k < k_count; ++k) {
        weights[k] = (static_cast<double>(doc_counts[k]) + alpha_) *
                     (static_cast<double>(count(k, words[i])) + beta_) * inv_denom[k];
        total += weights[k];
      }
      z[i] = sample_discrete(weights, total, rng);
      ++doc_counts[z[i]];
    }
  }
  const double denom = static_cast<double>(words.size()) + static_cast<double>(k_count) * alpha_;
  for (std::size_t k = 0; k < k_count; ++k) {
    out[k] = (static_cast<double>(doc_counts[k]) + alpha_) / denom;
  }
  return out;
}

void TopicModel::write(std::ostream& out) const {
  char a[64], b[64];
  std::snprintf(a, sizeof a, "%.17g", alpha_);
  std::snprintf(b, sizeof b, "%.17g", beta_);
  out << "topics " << topics_ << ' ' << vocab_.size() << ' ' << a << ' ' << b << ' ' << iterations_
      << ' ' << seed_ << '\n';
  for (const auto& w : vocab_) out << w << '\n';
  const std::size_t v = vocab_.size();
  for (std::size_t k = 0; k < topics_; ++k) {
    for (std::size_t w = 0; w < v; ++w) {
      if (w) out << ' ';
      out << counts_[k * v + w];
    }
    out << '\n';
  }
}

TopicModel TopicModel::read(std::istream& in) {
  TopicModel m;
  std::string tag;
  std::size_t v = 0;
  if (!(in >> tag >> m.topics_ >> v >> m.alpha_ >> m.beta_ >> m.iterations_ >> m.seed_) ||
      tag != "topics") {
    throw std::runtime_error("bad topic model header");
  }
  if (m.topics_ < 2) throw std::runtime_error("topic model needs K >= 2");
  m.vocab_.resize(v);
  for (std::size_t w = 0; w < v; ++w) {
    if (!(in >> m.vocab_[w])) throw std::runtime_error("truncated topic model vocabulary");
    m.index_.emplace(m.vocab_[w], w);
  }
  m.counts_.assign(m.topics_ * v, 0);
  m.totals_.assign(m.topics_, 0);
  for (std::size_t k = 0; k < m.topics_; ++k) {
    for (std::size_t w = 0; w < v; ++w) {
      if (!(in >> m.counts_[k * v + w]) || m.counts_[k * v + w] < 0) {
        throw std::runtime_error("truncated topic model counts");
      }
      m.totals_[k] += m.counts_[k * v + w];
    }
  }
  return m;
}

bool operator==(const TopicModel& a, const TopicModel& b) {
  return a.topics_ == b.topics_ && a.alpha_ == b.alpha_ && a.beta_ == b.beta_ &&
         a.iterations_ == b.iterations_ && a.seed_ == b.seed_ && a.vocab_ == b.vocab_ &&
         a.counts_ == b.counts_;
}

class LdaSampler {
 public:
  static TopicModel fit(const std::vector<std::vector<std::string>>& documents,
                        const LdaOptions& options, const SweepObserver& observer) {
    if (documents.empty()) throw std::invalid_argument("cannot fit LDA on an empty corpus");
    if (options.topics < 2) throw std::invalid_argument("LDA needs K >= 2");
    TopicModel m;
    m.topics_ = options.topics;
    m.alpha_ = options.alpha.value_or(1.0 / static_cast<double>(options.topics));
    m.beta_ = options.beta.value_or(1.0 / static_cast<double>(options.topics));
    if (!(m.alpha_ > 0.0) || !(m.beta_ > 0.0)) throw std::invalid_argument("LDA priors must be positive");
    m.iterations_ = options.iterations;
    m.seed_ = options.seed;

    std::set<std::string> vocab;
    for (const auto& doc : documents) vocab.insert(doc.begin(), doc.end());
    if (vocab.empty()) throw std::invalid_argument("corpus has no usable tokens for LDA");
    m.vocab_.assign(vocab.begin(), vocab.end());
    for (std::size_t w = 0; w < m.vocab_.size(); ++w) m.index_.emplace(m.vocab_[w], w);

    const std::size_t k_count = m.topics_;
    const std::size_t v = m.vocab_.size();
    m.counts_.assign(k_count * v, 0);
    m.totals_.assign(k_count, 0);

    Rng rng(options.seed);
    std::vector<std::vector<std::size_t>> words(documents.size());
    std::vector<std::vector<std::size_t>> z(documents.size());
    std::vector<std::vector<std::int64_t>> doc_counts(documents.size(),
                                                      std::vector<std::int64_t>(k_count, 0));
    for (std::size_t d = 0; d < documents.size(); ++d) {
      for (const auto& t : documents[d]) words[d].push_back(m.index_.at(t));
      z[d].resize(words[d].size());
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const std::size_t k = rng.below(k_count);
        z[d][i] = k;
        ++doc_counts[d][k];
        ++m.counts_[k * v + words[d][i]];
        ++m.totals_[k];
      }
    }

    const double vbeta = static_cast<double>(v) * m.beta_;
    std::vector<double> weights(k_count);
    for (std::size_t sweep = 0; sweep < m.iterations_; ++sweep) {
      for (std::size_t d = 0; d < documents.size(); ++d) {
        auto& nd = doc_counts[d];
        for (std::size_t i = 0; i < words[d].size(); ++i) {
          const std::size_t w = words[d][i];
          std::size_t k = z[d][i];
          --nd[k];
          --m.counts_[k * v + w];
          --m.totals_[k];
          double total = 0.0;
          for (std::size_t t = 0; t < k_count; ++t) {
            weights[t] = (static_cast<double>(nd[t]) + m.alpha_) *
                         (static_cast<double>(m.counts_[t * v + w]) + m.beta_) /
                         (static_cast<double>(m.totals_[t]) + vbeta);
            total += weights[t];
          }
          k = sample_discrete(weights, total, rng);
          z[d][i] = k;
          ++nd[k];
          ++m.counts_[k * v + w];
          ++m.totals_[k];
        }
      }
      if (observer) observer(sweep, m);
    }
    return m;
  }
};

TopicModel fit_lda(const std::vector<std::vector<std::string>>& documents, const LdaOptions& options,
                   const SweepObserver& observer) {
  return LdaSampler::fit(documents, options, observer);
}

}  // namespace sitewatch
