#include "sitewatch/corpus/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>

#include "sitewatch/features/sentiment.hpp"
#include "sitewatch/features/tokenizer.hpp"
#include "sitewatch/util/rng.hpp"

namespace sitewatch {

namespace {

constexpr const char* kConsonants = "bdfgklmnprstvz";
constexpr const char* kVowels = "aeiou";
constexpr std::size_t kSyllables = 14 * 5;

const char* const kNegativeWords[] = {"threat", "destroyed", "illegal", "poaching", "damage",
                                      "pollution", "encroachment", "deforestation", "danger",
                                      "disaster"};
const char* const kPositiveWords[] = {"beautiful", "scenic", "celebrated", "thriving", "wonderful",
                                      "festival", "holiday", "adventure", "popular", "luxury"};

std::string syllable(std::size_t s) {
  return {kConsonants[s / 5], kVowels[s % 5]};
}

// Pronounceable three-syllable words; anything colliding with a stopword or
// a lexicon entry is skipped so generated text carries no accidental signal.
const std::vector<std::string>& vocabulary(std::size_t size) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<std::string>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& words = cache[size];
  if (words.size() == size) return words;
  const auto& stop = default_stopwords();
  const auto& lex = SentimentLexicon::bundled();
  for (std::size_t i = 0; words.size() < size; ++i) {
    std::string w = syllable(i % kSyllables) + syllable((i / kSyllables) % kSyllables) +
                    syllable((i / (kSyllables * kSyllables)) % kSyllables);
    if (i >= kSyllables * kSyllables * kSyllables) {
      throw std::invalid_argument("synthetic vocab_size too large");
    }
    if (stop.count(w) || lex.polarity(w)) continue;
    words.push_back(std::move(w));
  }
  return words;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n_articles < 1 || vocab_size < 1 || topic_count < 1) {
    throw std::invalid_argument("synthetic spec counts must be >= 1");
  }
  if (!(relevance_rate >= 0.0 && relevance_rate <= 1.0)) {
    throw std::invalid_argument("relevance_rate must lie in [0, 1]");
  }
  if (!(noise_rate >= 0.0 && noise_rate <= 1.0)) {
    throw std::invalid_argument("noise_rate must lie in [0, 1]");
  }
  if (!(signal_min >= 0.0 && signal_min <= signal_max && signal_max <= 1.0)) {
    throw std::invalid_argument("signal range must satisfy 0 <= signal_min <= signal_max <= 1");
  }
  if (vocab_size < 2 * topic_count + 1) {
    throw std::invalid_argument("vocab_size must exceed 2 * topic_count");
  }
}

nlohmann::json to_json(const SyntheticSpec& s) {
  return {{"n_articles", s.n_articles},   {"relevance_rate", s.relevance_rate},
          {"vocab_size", s.vocab_size},   {"topic_count", s.topic_count},
          {"noise_rate", s.noise_rate},   {"seed", s.seed},
          {"signal_min", s.signal_min},   {"signal_max", s.signal_max},
          {"title_length", s.title_length}, {"description_length", s.description_length},
          {"content_length", s.content_length}, {"sentiment_rate", s.sentiment_rate}};
}

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
  static const char* const kKeys[] = {"n_articles",   "relevance_rate",     "vocab_size",
                                      "topic_count",  "noise_rate",         "seed",
                                      "signal_min",   "signal_max",         "title_length",
                                      "description_length", "content_length", "sentiment_rate"};
  for (const auto& [key, _] : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw std::invalid_argument("unknown synthetic spec key '" + key + "'");
  }
  SyntheticSpec s;
  s.n_articles = j.value("n_articles", s.n_articles);
  s.relevance_rate = j.value("relevance_rate", s.relevance_rate);
  s.vocab_size = j.value("vocab_size", s.vocab_size);
  s.topic_count = j.value("topic_count", s.topic_count);
  s.noise_rate = j.value("noise_rate", s.noise_rate);
  s.seed = j.value("seed", s.seed);
  s.signal_min = j.value("signal_min", s.signal_min);
  s.signal_max = j.value("signal_max", s.signal_max);
  s.title_length = j.value("title_length", s.title_length);
  s.description_length = j.value("description_length", s.description_length);
  s.content_length = j.value("content_length", s.content_length);
  s.sentiment_rate = j.value("sentiment_rate", s.sentiment_rate);
  s.validate();
  return s;
}

const std::string& synthetic_word(const SyntheticSpec& spec, std::size_t i) {
  return vocabulary(spec.vocab_size).at(i);
}

std::pair<std::size_t, std::size_t> synthetic_topic_block(const SyntheticSpec& spec,
                                                          std::size_t topic) {
  const std::size_t blocks = 2 * spec.topic_count;
  const std::size_t width = spec.vocab_size / blocks;
  return {topic * width, (topic + 1) * width};
}

Corpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const auto& vocab = vocabulary(spec.vocab_size);
  Rng label_rng(mix_seed(spec.seed, 1));
  Rng noise_rng(mix_seed(spec.seed, 2));
  Rng text_rng(mix_seed(spec.seed, 3));

  const std::size_t n = spec.n_articles;
  const auto n_pos = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.relevance_rate));
  std::vector<int> gold(n, 0);
  for (std::size_t i = 0; i < n_pos; ++i) gold[i] = 1;
  label_rng.shuffle(gold);

  auto draw_field = [&](std::size_t length, std::size_t topic, double signal, int label) {
    const auto [lo, hi] = synthetic_topic_block(spec, topic);
    std::string text;
    for (std::size_t t = 0; t < length; ++t) {
      const std::size_t w = text_rng.bernoulli(signal) ? lo + text_rng.below(hi - lo)
                                                       : text_rng.below(spec.vocab_size);
      if (!text.empty()) text.push_back(' ');
      text += vocab[w];
    }
    if (text_rng.bernoulli(spec.sentiment_rate)) {
      // Relevant articles lean negative, irrelevant ones lean positive.
      const bool negative = text_rng.bernoulli(label == 1 ? 0.75 : 0.25);
      const std::size_t k = text_rng.below(10);
      text += ' ';
      text += negative ? kNegativeWords[k] : kPositiveWords[k];
    }
    return text;
  };

  Corpus corpus;
  char buf[64];
  for (std::size_t i = 0; i < n; ++i) {
    const int label = gold[i];
    const std::size_t topic = (label == 1 ? 0 : spec.topic_count) + text_rng.below(spec.topic_count);
    const double signal = spec.signal_min + (spec.signal_max - spec.signal_min) * text_rng.uniform();
    Article a;
    std::snprintf(buf, sizeof buf, "syn-%06zu", i);
    a.id = buf;
    std::snprintf(buf, sizeof buf, "site-%02zu", text_rng.below(10));
    a.site_id = buf;
    a.title = draw_field(spec.title_length, topic, signal, label);
    a.description = draw_field(spec.description_length, topic, signal, label);
    a.content = draw_field(spec.content_length, topic, signal, label);
    a.url = "https://news.example.org/synthetic/" + a.id;
    a.source = "synthetic";
    a.published_at = Date(2021, 1, 1).plus_days(static_cast<int>(i % 365));
    corpus.add_article(std::move(a));
  }
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& id = corpus.articles()[i].id;
    corpus.add_label({id, gold[i], std::nullopt, kGoldAnnotator, true});
    const int noisy = noise_rng.bernoulli(spec.noise_rate) ? 1 - gold[i] : gold[i];
    corpus.add_label({id, noisy, std::nullopt, kNoisyAnnotator, false});
  }
  corpus.provenance = "synthetic:" + to_json(spec).dump();
  return corpus;
}

}  // namespace sitewatch
