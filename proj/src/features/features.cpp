#include "sitewatch/features/features.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sitewatch/util/hash.hpp"
#include "sitewatch/util/rng.hpp"

namespace sitewatch {

FeatureRow FeatureVector::flatten() const {
  FeatureRow out;
  out.reserve(size());
  out.insert(out.end(), text_block.begin(), text_block.end());
  out.insert(out.end(), sentiment_block.begin(), sentiment_block.end());
  out.insert(out.end(), topic_block.begin(), topic_block.end());
  return out;
}

FeatureSpace::FeatureSpace(TextVectorizer vectorizer, SentimentLexicon lexicon, TopicModel topics)
    : vectorizer_(std::move(vectorizer)), lexicon_(std::move(lexicon)), topics_(std::move(topics)) {}

FeatureSpace FeatureSpace::fit(std::span<const Article> articles, const SentimentLexicon& lexicon,
                               const FeatureOptions& options) {
  if (articles.empty()) throw std::invalid_argument("cannot fit features on an empty corpus");
  std::vector<std::string> texts;
  texts.reserve(articles.size());
  for (const auto& a : articles) texts.push_back(a.full_text());
  TextVectorizer vectorizer = TextVectorizer::fit(texts, options.mode, options.text_dim);
  Tokenizer tokenizer;
  std::vector<std::vector<std::string>> docs;
  docs.reserve(texts.size());
  for (const auto& t : texts) docs.push_back(tokenizer.tokenize(t));
  TopicModel topics = fit_lda(docs, options.lda);
  return FeatureSpace(std::move(vectorizer), lexicon, std::move(topics));
}

FeatureVector FeatureSpace::featurize(const Article& article) const {
  const std::string text = article.full_text();
  const auto tokens = tokenizer_.tokenize(text);
  FeatureVector fv;
  fv.text_block = vectorizer_.transform_tokens(tokens);
  fv.sentiment_block = sentiment_scores(article, lexicon_);
  // Seeded from the text alone so the result does not depend on call order.
  fv.topic_block = topics_.infer(tokens, mix_seed(topics_.seed(), fnv1a64(text)));
  return fv;
}

FeatureMatrix FeatureSpace::featurize_all(std::span<const Article> articles, unsigned threads) const {
  FeatureMatrix rows(articles.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, articles.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < articles.size(); i = next++) {
      rows[i] = featurize(articles[i]).flatten();
    }
  };
  if (threads <= 1) {
    work();
    return rows;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return rows;
}

void FeatureSpace::write(std::ostream& out) const {
  vectorizer_.write(out);
  out << "lexicon " << lexicon_.size() << '\n';
  lexicon_.write(out);
  topics_.write(out);
}

FeatureSpace FeatureSpace::read(std::istream& in) {
  TextVectorizer vectorizer = TextVectorizer::read(in);
  std::string tag;
  std::size_t n = 0;
  if (!(in >> tag >> n) || tag != "lexicon") throw std::runtime_error("bad lexicon section");
  SentimentLexicon lexicon;
  for (std::size_t i = 0; i < n; ++i) {
    std::string token;
    double polarity = 0.0;
    if (!(in >> token >> polarity)) throw std::runtime_error("truncated lexicon section");
    lexicon.add(token, polarity);
  }
  TopicModel topics = TopicModel::read(in);
  return FeatureSpace(std::move(vectorizer), std::move(lexicon), std::move(topics));
}

}  // namespace sitewatch
