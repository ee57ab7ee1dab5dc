#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sitewatch/corpus/corpus.hpp"

namespace sitewatch {

// Parameters of the generated stand-in corpus. Each class owns `topic_count`
// topics whose word distributions peak on disjoint vocabulary blocks; every
// token is drawn from the document's topic with a per-document signal
// probability and from a uniform background over the whole vocabulary
// otherwise. Documents with a weak signal are the hard cases.
struct SyntheticSpec {
  std::size_t n_articles = 1000;
  double relevance_rate = 0.2;
  std::size_t vocab_size = 2000;
  std::size_t topic_count = 2;  // per class
  double noise_rate = 0.0;
  std::uint64_t seed = 0;

  // Per-document signal probability is uniform in [signal_min, signal_max].
  double signal_min = 0.2;
  double signal_max = 0.6;
  std::size_t title_length = 8;
  std::size_t description_length = 16;
  std::size_t content_length = 40;
  // Chance per field of one class-leaning sentiment word.
  double sentiment_rate = 0.3;

  void validate() const;
};

nlohmann::json to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);

inline constexpr const char* kNoisyAnnotator = "annotator-1";
inline constexpr const char* kGoldAnnotator = "gold";

// Deterministic for a fixed spec. The corpus carries a gold label
// (is_gold = true) and a noisy annotator label (kNoisyAnnotator) per article;
// the noisy label is the gold label flipped with probability noise_rate.
// Exactly round(n * relevance_rate) articles are relevant.
Corpus generate_synthetic(const SyntheticSpec& spec);

// Word i of the generated vocabulary.
const std::string& synthetic_word(const SyntheticSpec& spec, std::size_t i);
// Vocabulary block [begin, end) on which topic t peaks; relevant topics are
// 0..topic_count-1, irrelevant topics follow.
std::pair<std::size_t, std::size_t> synthetic_topic_block(const SyntheticSpec& spec, std::size_t topic);

}  // namespace sitewatch
