#include "sitewatch/corpus/corpus.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "sitewatch/util/csv.hpp"

namespace sitewatch {

using nlohmann::json;

void validate(const Article& article) {
  if (article.id.empty()) throw std::invalid_argument("article id is empty");
  if (article.title.empty()) {
    throw std::invalid_argument("article '" + article.id + "' has an empty title");
  }
}

void validate(const LabeledExample& label) {
  auto binary = [](int v) { return v == 0 || v == 1; };
  if (label.article_id.empty()) throw std::invalid_argument("label without article_id");
  if (!binary(label.conservation_label)) {
    throw std::invalid_argument("conservation_label must be 0 or 1");
  }
  if (label.infrastructure_label) {
    if (!binary(*label.infrastructure_label)) {
      throw std::invalid_argument("infrastructure_label must be 0 or 1");
    }
    if (*label.infrastructure_label == 1 && label.conservation_label != 1) {
      throw std::invalid_argument("article '" + label.article_id +
                                  "': infrastructure_label = 1 requires conservation_label = 1");
    }
  }
}

json to_json(const Article& a) {
  return json{{"id", a.id},
              {"site_id", a.site_id},
              {"title", a.title},
              {"description", a.description},
              {"content", a.content},
              {"url", a.url},
              {"source", a.source},
              {"published_at", a.published_at.str()},
              {"language", a.language}};
}

namespace {

std::string optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) throw std::invalid_argument(std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

}  // namespace

Article article_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("record is not a JSON object");
  Article a;
  a.id = optional_string(j, "id");
  a.site_id = optional_string(j, "site_id");
  a.title = optional_string(j, "title");
  a.description = optional_string(j, "description");
  a.content = optional_string(j, "content");
  a.url = optional_string(j, "url");
  a.source = optional_string(j, "source");
  const std::string date = optional_string(j, "published_at");
  a.published_at = Date::parse(date);
  a.language = optional_string(j, "language");
  if (a.language.empty()) a.language = "en";
  validate(a);
  return a;
}

void Corpus::add_article(Article article) {
  validate(article);
  if (index_.count(article.id)) {
    throw std::runtime_error("duplicate article id '" + article.id + "'");
  }
  index_.emplace(article.id, articles_.size());
  articles_.push_back(std::move(article));
}

void Corpus::add_label(LabeledExample label) {
  validate(label);
  if (!index_.count(label.article_id)) {
    throw std::runtime_error("label refers to unknown article '" + label.article_id + "'");
  }
  labels_.push_back(std::move(label));
}

const Article* Corpus::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &articles_[it->second];
}

std::optional<std::size_t> Corpus::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::optional<int>> Corpus::conservation_labels(bool gold,
                                                            const std::string& annotator) const {
  std::vector<std::optional<int>> out(articles_.size());
  for (const auto& l : labels_) {
    if (gold ? l.is_gold : (!l.is_gold && l.annotator_id == annotator)) {
      out[index_.at(l.article_id)] = l.conservation_label;
    }
  }
  return out;
}

std::vector<std::optional<int>> Corpus::infrastructure_labels(bool gold,
                                                              const std::string& annotator) const {
  std::vector<std::optional<int>> out(articles_.size());
  for (const auto& l : labels_) {
    if (gold ? l.is_gold : (!l.is_gold && l.annotator_id == annotator)) {
      out[index_.at(l.article_id)] = l.infrastructure_label;
    }
  }
  return out;
}

LoadResult parse_corpus(std::istream& in) {
  LoadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Article article;
    try {
      article = article_from_json(json::parse(line));
    } catch (const std::exception& e) {
      ++result.skipped;
      result.errors.push_back({line_no, e.what()});
      continue;
    }
    if (result.corpus.find(article.id)) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate article id '" +
                               article.id + "'");
    }
    result.corpus.add_article(std::move(article));
  }
  return result;
}

LoadResult load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open corpus " + path.string());
  LoadResult result = parse_corpus(in);
  result.corpus.provenance = path.string();
  return result;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& a : corpus.articles()) out << to_json(a).dump() << '\n';
}

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", score);
  return buf;
}

void write_predictions(const Corpus& corpus, const std::vector<ArticleScores>& predictions,
                       std::ostream& out) {
  std::unordered_map<std::string, const ArticleScores*> by_id;
  for (const auto& p : predictions) by_id[p.article_id] = &p;
  csv::write_row(out, {"id", "site_id", "title", "conservation_score", "conservation_label",
                       "infrastructure_score", "infrastructure_label", "published_at"});
  for (const auto& a : corpus.articles()) {
    auto it = by_id.find(a.id);
    if (it == by_id.end()) throw std::runtime_error("no prediction for article '" + a.id + "'");
    const ArticleScores& p = *it->second;
    csv::write_row(out, {a.id, a.site_id, a.title, format_score(p.conservation_score),
                         std::to_string(p.conservation_label),
                         p.infrastructure_score ? format_score(*p.infrastructure_score) : "",
                         p.infrastructure_label ? std::to_string(*p.infrastructure_label) : "",
                         a.published_at.str()});
  }
}

void save_predictions(const Corpus& corpus, const std::vector<ArticleScores>& predictions,
                      const std::filesystem::path& path) {
  // Validate before touching the file so a failed call leaves nothing behind.
  std::unordered_map<std::string, bool> seen;
  for (const auto& p : predictions) seen[p.article_id] = true;
  for (const auto& a : corpus.articles()) {
    if (!seen.count(a.id)) throw std::runtime_error("no prediction for article '" + a.id + "'");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_predictions(corpus, predictions, out);
}

std::vector<ArticleScores> load_predictions(const std::filesystem::path& path) {
  const auto rows = csv::read_file(path.string());
  if (rows.empty()) throw std::runtime_error("empty predictions file " + path.string());
  const auto& h = rows.front();
  const auto c_id = csv::column(h, "id");
  const auto c_cs = csv::column(h, "conservation_score");
  const auto c_cl = csv::column(h, "conservation_label");
  const auto c_is = csv::column(h, "infrastructure_score");
  const auto c_il = csv::column(h, "infrastructure_label");
  std::vector<ArticleScores> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != h.size()) {
      throw std::runtime_error("predictions row " + std::to_string(r) + ": wrong column count");
    }
    ArticleScores s;
    s.article_id = row[c_id];
    s.conservation_score = std::stod(row[c_cs]);
    s.conservation_label = std::stoi(row[c_cl]);
    if (!row[c_is].empty()) s.infrastructure_score = std::stod(row[c_is]);
    if (!row[c_il].empty()) s.infrastructure_label = std::stoi(row[c_il]);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace sitewatch
