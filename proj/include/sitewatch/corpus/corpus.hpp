#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sitewatch/util/date.hpp"

namespace sitewatch {

struct Article {
  std::string id;
  std::string site_id;
  std::string title;
  std::string description;
  std::string content;
  std::string url;
  std::string source;
  Date published_at;
  std::string language = "en";

  // title ⧺ " " ⧺ description ⧺ " " ⧺ content; missing fields are empty strings.
  std::string full_text() const { return title + " " + description + " " + content; }

  friend bool operator==(const Article&, const Article&) = default;
};

struct LabeledExample {
  std::string article_id;
  int conservation_label = 0;
  std::optional<int> infrastructure_label;
  std::string annotator_id;
  bool is_gold = false;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

// Throws std::invalid_argument on a record that violates the article invariants.
void validate(const Article& article);
void validate(const LabeledExample& label);

nlohmann::json to_json(const Article& article);
Article article_from_json(const nlohmann::json& j);

// Insertion-ordered article collection with unique ids. Labels must refer to
// articles already present.
class Corpus {
 public:
  void add_article(Article article);
  void add_label(LabeledExample label);

  const std::vector<Article>& articles() const { return articles_; }
  const std::vector<LabeledExample>& labels() const { return labels_; }
  std::size_t size() const { return articles_.size(); }
  bool empty() const { return articles_.empty(); }

  const Article* find(const std::string& id) const;
  std::optional<std::size_t> index_of(const std::string& id) const;

  // Labels for one annotator (or the gold set) keyed by position in articles().
  // Articles without a matching label get std::nullopt.
  std::vector<std::optional<int>> conservation_labels(bool gold,
                                                      const std::string& annotator = {}) const;
  std::vector<std::optional<int>> infrastructure_labels(bool gold,
                                                        const std::string& annotator = {}) const;

  std::string provenance;

 private:
  std::vector<Article> articles_;
  std::vector<LabeledExample> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct RecordError {
  std::size_t line = 0;
  std::string message;
};

struct LoadResult {
  Corpus corpus;
  std::size_t skipped = 0;
  std::vector<RecordError> errors;
};

// JSONL, one article per line. Malformed or invalid lines are skipped and
// reported; a duplicate id throws.
LoadResult load_corpus(const std::filesystem::path& path);
LoadResult parse_corpus(std::istream& in);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Labels CSV: article_id,annotator_id,conservation_label,infrastructure_label,is_gold
std::vector<LabeledExample> load_labels(const std::filesystem::path& path);
void save_labels(const std::vector<LabeledExample>& labels, const std::filesystem::path& path);
// Adds labels to a corpus; throws if any article_id is unknown.
void attach_labels(Corpus& corpus, const std::vector<LabeledExample>& labels);

struct ArticleScores {
  std::string article_id;
  double conservation_score = 0.0;
  int conservation_label = 0;
  std::optional<double> infrastructure_score;
  std::optional<int> infrastructure_label;
};

// Predictions CSV, one row per article in corpus order. Throws if any
// article lacks a prediction.
void save_predictions(const Corpus& corpus, const std::vector<ArticleScores>& predictions,
                      const std::filesystem::path& path);
void write_predictions(const Corpus& corpus, const std::vector<ArticleScores>& predictions,
                       std::ostream& out);
std::vector<ArticleScores> load_predictions(const std::filesystem::path& path);

std::string format_score(double score);

}  // namespace sitewatch
