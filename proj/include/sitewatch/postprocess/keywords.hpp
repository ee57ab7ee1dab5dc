#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "sitewatch/corpus/corpus.hpp"

namespace sitewatch {

// Case-insensitive whole-word phrase matcher over a curated list.
class PhraseMatcher {
 public:
  PhraseMatcher() = default;
  explicit PhraseMatcher(std::vector<std::string> phrases);

  // One phrase per line; blank lines and '#' comments ignored.
  static PhraseMatcher load(const std::filesystem::path& path);

  // Distinct phrases found in the text, ordered by first occurrence
  // (ties by list order). Returned with the list's casing.
  std::vector<std::string> matches(const std::string& text) const;
  // Same, across title, description and content in that order. Phrases do
  // not match across field boundaries.
  std::vector<std::string> distinct_matches(const Article& article) const;

  const std::vector<std::string>& phrases() const { return phrases_; }

 private:
  void scan(const std::string& text, std::vector<char>& seen, std::vector<std::string>& out) const;

  std::vector<std::string> phrases_;
  std::vector<std::vector<std::string>> tokens_;  // lowercase words per phrase
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_;
};

struct KeywordSet {
  std::string article_id;
  std::vector<std::string> dictionary_hits;
  std::vector<std::string> salient_terms;
  // dictionary_hits followed by salient terms not already present
  // (compared lowercase); original casing kept.
  std::vector<std::string> combined;

  friend bool operator==(const KeywordSet&, const KeywordSet&) = default;
};

// Proper-noun phrases from description and content: maximal runs of >= 2
// capitalized words that do not start a sentence, plus single capitalized
// words seen >= 3 times mid-sentence. Titles are skipped because headline
// casing capitalizes every word.
std::vector<std::string> extract_salient_terms(const Article& article);

KeywordSet extract_keywords(const Article& article, const PhraseMatcher& dictionary);

}  // namespace sitewatch
