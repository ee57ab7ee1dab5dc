#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "sitewatch/corpus/corpus.hpp"
#include "sitewatch/features/lda.hpp"
#include "sitewatch/features/sentiment.hpp"
#include "sitewatch/features/vectorizer.hpp"

namespace sitewatch {

using FeatureRow = std::vector<double>;
using FeatureMatrix = std::vector<FeatureRow>;

struct FeatureVector {
  std::vector<double> text_block;
  std::array<double, 3> sentiment_block{};  // title, description, content
  std::vector<double> topic_block;

  std::size_t size() const { return text_block.size() + 3 + topic_block.size(); }
  // text ⧺ sentiment ⧺ topic
  FeatureRow flatten() const;
};

struct FeatureOptions {
  VectorizerMode mode = VectorizerMode::hashed;
  std::size_t text_dim = TextVectorizer::kDefaultHashedDim;
  LdaOptions lda;
};

// Fitted vectorizer + lexicon + topic model. Immutable once built, so
// featurize may run concurrently.
class FeatureSpace {
 public:
  FeatureSpace(TextVectorizer vectorizer, SentimentLexicon lexicon, TopicModel topics);

  // Vectorizer and LDA are both fitted on the concatenated article text.
  static FeatureSpace fit(std::span<const Article> articles, const SentimentLexicon& lexicon,
                          const FeatureOptions& options);

  FeatureVector featurize(const Article& article) const;
  // Rows in input order; work is spread over `threads` workers (0 = hardware).
  FeatureMatrix featurize_all(std::span<const Article> articles, unsigned threads = 0) const;

  std::size_t dimension() const { return vectorizer_.dimension() + 3 + topics_.topic_count(); }
  const TextVectorizer& vectorizer() const { return vectorizer_; }
  const SentimentLexicon& lexicon() const { return lexicon_; }
  const TopicModel& topics() const { return topics_; }

  void write(std::ostream& out) const;
  static FeatureSpace read(std::istream& in);

 private:
  TextVectorizer vectorizer_;
  SentimentLexicon lexicon_;
  TopicModel topics_;
  Tokenizer tokenizer_;
};

}  // namespace sitewatch
