#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace sitewatch {

const std::unordered_set<std::string>& default_stopwords();

// Splits text into ASCII alphabetic runs of length >= 2, lowercased by
// default, dropping stopwords. Non-ASCII bytes act as separators.
class Tokenizer {
 public:
  Tokenizer() : stopwords_(&default_stopwords()) {}
  Tokenizer(bool lowercase, const std::unordered_set<std::string>* stopwords)
      : lowercase_(lowercase), stopwords_(stopwords) {}

  std::vector<std::string> tokenize(std::string_view text) const;

 private:
  bool lowercase_ = true;
  const std::unordered_set<std::string>* stopwords_ = nullptr;
};

// Case-preserving word split used for phrase matching and salient-term
// extraction: runs of ASCII letters/digits, with internal '-' or '\'' kept.
struct Word {
  std::string text;
  bool sentence_start = false;     // first word of the text or after . ! ?
  bool after_punctuation = false;  // separated from the previous word by more than whitespace
};
std::vector<Word> split_words(std::string_view text);

std::string to_lower(std::string_view s);

}  // namespace sitewatch
