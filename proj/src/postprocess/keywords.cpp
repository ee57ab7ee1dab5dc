#include "sitewatch/postprocess/keywords.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "sitewatch/features/tokenizer.hpp"

namespace sitewatch {

namespace {

std::vector<std::string> lower_words(const std::string& text) {
  std::vector<std::string> out;
  for (auto& w : split_words(text)) out.push_back(to_lower(w.text));
  return out;
}

bool is_capitalized(const std::string& word) { return !word.empty() && word[0] >= 'A' && word[0] <= 'Z'; }

}  // namespace

PhraseMatcher::PhraseMatcher(std::vector<std::string> phrases) {
  for (auto& p : phrases) {
    auto words = lower_words(p);
    if (words.empty()) continue;
    by_first_[words.front()].push_back(phrases_.size());
    tokens_.push_back(std::move(words));
    phrases_.push_back(std::move(p));
  }
}

PhraseMatcher PhraseMatcher::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open keyword dictionary " + path.string());
  std::vector<std::string> phrases;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t");
    phrases.push_back(line.substr(b, e - b + 1));
  }
  return PhraseMatcher(std::move(phrases));
}

void PhraseMatcher::scan(const std::string& text, std::vector<char>& seen,
                         std::vector<std::string>& out) const {
  const auto words = lower_words(text);
  for (std::size_t i = 0; i < words.size(); ++i) {
    auto it = by_first_.find(words[i]);
    if (it == by_first_.end()) continue;
    for (std::size_t idx : it->second) {
      if (seen[idx]) continue;
      const auto& phrase = tokens_[idx];
      if (i + phrase.size() > words.size()) continue;
      bool ok = true;
      for (std::size_t j = 1; j < phrase.size() && ok; ++j) ok = words[i + j] == phrase[j];
      if (ok) {
        seen[idx] = 1;
        out.push_back(phrases_[idx]);
      }
    }
  }
}

std::vector<std::string> PhraseMatcher::matches(const std::string& text) const {
  std::vector<char> seen(phrases_.size(), 0);
  std::vector<std::string> out;
  scan(text, seen, out);
  return out;
}

std::vector<std::string> PhraseMatcher::distinct_matches(const Article& article) const {
  std::vector<char> seen(phrases_.size(), 0);
  std::vector<std::string> out;
  scan(article.title, seen, out);
  scan(article.description, seen, out);
  scan(article.content, seen, out);
  return out;
}

std::vector<std::string> extract_salient_terms(const Article& article) {
  struct Single {
    std::string display;
    std::size_t count = 0;
    std::size_t first = 0;
  };
  std::vector<std::pair<std::size_t, std::string>> terms;  // (position, term)
  std::map<std::string, Single> singles;
  std::size_t position = 0;

  for (const std::string* field : {&article.description, &article.content}) {
    const auto words = split_words(*field);
    std::size_t i = 0;
    while (i < words.size()) {
      if (!is_capitalized(words[i].text) || words[i].sentence_start) {
        ++i;
        continue;
      }
      std::size_t j = i + 1;
      while (j < words.size() && is_capitalized(words[j].text) && !words[j].sentence_start &&
             !words[j].after_punctuation) {
        ++j;
      }
      if (j - i >= 2) {
        std::string term = words[i].text;
        for (std::size_t t = i + 1; t < j; ++t) term += " " + words[t].text;
        terms.emplace_back(position + i, std::move(term));
      } else {
        auto& s = singles[to_lower(words[i].text)];
        if (s.count++ == 0) {
          s.display = words[i].text;
          s.first = position + i;
        }
      }
      i = j;
    }
    position += words.size();
  }
  for (auto& [_, s] : singles) {
    if (s.count >= 3) terms.emplace_back(s.first, s.display);
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto& [_, term] : terms) {
    if (seen.insert(to_lower(term)).second) out.push_back(std::move(term));
  }
  return out;
}

KeywordSet extract_keywords(const Article& article, const PhraseMatcher& dictionary) {
  KeywordSet ks;
  ks.article_id = article.id;
  ks.dictionary_hits = dictionary.distinct_matches(article);
  ks.salient_terms = extract_salient_terms(article);
  std::set<std::string> seen;
  for (const auto& group : {&ks.dictionary_hits, &ks.salient_terms}) {
    for (const auto& k : *group) {
      if (seen.insert(to_lower(k)).second) ks.combined.push_back(k);
    }
  }
  return ks;
}

}  // namespace sitewatch
