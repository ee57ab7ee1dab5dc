#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sitewatch/corpus/corpus.hpp"

namespace sitewatch {

class SentimentLexicon {
 public:
  // token<TAB>polarity per line; '#' comment lines. Polarity must lie in [-1, 1].
  static SentimentLexicon parse(std::istream& in);
  static SentimentLexicon load(const std::filesystem::path& path);
  // The lexicon shipped as data/lexicon.tsv, compiled in.
  static const SentimentLexicon& bundled();

  void add(const std::string& token, double polarity);
  std::optional<double> polarity(const std::string& token) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, double>& entries() const { return entries_; }

  void write(std::ostream& out) const;

  friend bool operator==(const SentimentLexicon&, const SentimentLexicon&) = default;

 private:
  std::map<std::string, double> entries_;
};

// Mean lexicon polarity over matched tokens of one text; 0.0 without matches.
double text_polarity(const std::string& text, const SentimentLexicon& lexicon);

// (title, description, content) polarities, each clamped to [-1, 1].
std::array<double, 3> sentiment_scores(const Article& article, const SentimentLexicon& lexicon);

}  // namespace sitewatch
