#include "sitewatch/features/tokenizer.hpp"

#include <cctype>

namespace sitewatch {

namespace {

bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_alnum(char c) { return is_alpha(c) || (c >= '0' && c <= '9'); }
char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

}  // namespace

const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words = {
      "a",       "about",   "above",  "after",   "again",  "against", "all",    "also",
      "am",      "an",      "and",    "any",     "are",    "as",      "at",     "be",
      "because", "been",    "before", "being",   "below",  "between", "both",   "but",
      "by",      "can",     "could",  "did",     "do",     "does",    "doing",  "down",
      "during",  "each",    "few",    "for",     "from",   "further", "had",    "has",
      "have",    "having",  "he",     "her",     "here",   "hers",    "herself", "him",
      "himself", "his",     "how",    "if",      "in",     "into",    "is",     "it",
      "its",     "itself",  "just",   "me",      "more",   "most",    "my",     "myself",
      "no",      "nor",     "not",    "now",     "of",     "off",     "on",     "once",
      "only",    "or",      "other",  "our",     "ours",   "ourselves", "out",  "over",
      "own",     "said",    "same",   "she",     "should", "so",      "some",   "such",
      "than",    "that",    "the",    "their",   "theirs", "them",    "themselves", "then",
      "there",   "these",   "they",   "this",    "those",  "through", "to",     "too",
      "under",   "until",   "up",     "very",    "was",    "we",      "were",   "what",
      "when",    "where",   "which",  "while",   "who",    "whom",    "why",    "will",
      "with",    "would",   "you",    "your",    "yours",  "yourself", "yourselves"};
  return words;
}

std::vector<std::string> Tokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_alpha(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::string tok;
    while (j < text.size() && is_alpha(text[j])) {
      tok.push_back(lowercase_ ? lower(text[j]) : text[j]);
      ++j;
    }
    i = j;
    if (tok.size() < 2) continue;
    if (stopwords_ && stopwords_->count(lowercase_ ? tok : to_lower(tok))) continue;
    out.push_back(std::move(tok));
  }
  return out;
}

std::vector<Word> split_words(std::string_view text) {
  std::vector<Word> out;
  bool at_sentence_start = true;
  bool punctuation = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (!is_alnum(c)) {
      if (c == '.' || c == '!' || c == '?') at_sentence_start = true;
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') punctuation = true;
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() &&
           (is_alnum(text[j]) ||
            ((text[j] == '-' || text[j] == '\'') && j + 1 < text.size() && is_alnum(text[j + 1]) &&
             j > i))) {
      ++j;
    }
    out.push_back({std::string(text.substr(i, j - i)), at_sentence_start, punctuation});
    at_sentence_start = false;
    punctuation = false;
    i = j;
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = lower(c);
  return out;
}

}  // namespace sitewatch
