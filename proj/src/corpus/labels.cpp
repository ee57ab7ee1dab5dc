#include <algorithm>
#include <fstream>
#include <stdexcept>

#include "sitewatch/corpus/corpus.hpp"
#include "sitewatch/corpus/labels.hpp"
#include "sitewatch/util/csv.hpp"

namespace sitewatch {

namespace {

int parse_binary(const std::string& field, std::size_t row, const char* what) {
  if (field == "0") return 0;
  if (field == "1") return 1;
  throw std::runtime_error("labels row " + std::to_string(row) + ": " + what +
                           " must be 0 or 1, got '" + field + "'");
}

bool parse_flag(const std::string& field, std::size_t row) {
  if (field == "1" || field == "true" || field == "TRUE") return true;
  if (field == "0" || field == "false" || field == "FALSE" || field.empty()) return false;
  throw std::runtime_error("labels row " + std::to_string(row) + ": bad is_gold '" + field + "'");
}

}  // namespace

std::vector<LabeledExample> load_labels(const std::filesystem::path& path) {
  const auto rows = csv::read_file(path.string());
  if (rows.empty()) return {};
  const auto& h = rows.front();
  const auto c_id = csv::column(h, "article_id");
  const auto c_ann = csv::column(h, "annotator_id");
  const auto c_cons = csv::column(h, "conservation_label");
  const auto c_inf = csv::column(h, "infrastructure_label");
  const auto c_gold = csv::column(h, "is_gold");
  std::vector<LabeledExample> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != h.size()) {
      throw std::runtime_error("labels row " + std::to_string(r) + ": wrong column count");
    }
    LabeledExample l;
    l.article_id = row[c_id];
    l.annotator_id = row[c_ann];
    l.conservation_label = parse_binary(row[c_cons], r, "conservation_label");
    if (!row[c_inf].empty()) l.infrastructure_label = parse_binary(row[c_inf], r, "infrastructure_label");
    l.is_gold = parse_flag(row[c_gold], r);
    validate(l);
    out.push_back(std::move(l));
  }
  return out;
}

void save_labels(const std::vector<LabeledExample>& labels, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  csv::write_row(out, {"article_id", "annotator_id", "conservation_label", "infrastructure_label",
                       "is_gold"});
  for (const auto& l : labels) {
    csv::write_row(out, {l.article_id, l.annotator_id, std::to_string(l.conservation_label),
                         l.infrastructure_label ? std::to_string(*l.infrastructure_label) : "",
                         l.is_gold ? "1" : "0"});
  }
}

void attach_labels(Corpus& corpus, const std::vector<LabeledExample>& labels) {
  for (const auto& l : labels) corpus.add_label(l);
}

LabelResolution resolve_labels(const BinaryLabels& a, const BinaryLabels& b,
                               const BinaryLabels& resolution) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("annotator label sets cover different article ids");
  }
  LabelResolution out;
  std::vector<std::string> unresolved;
  for (const auto& [id, va] : a) {
    auto it = b.find(id);
    if (it == b.end()) {
      throw std::invalid_argument("annotator label sets cover different article ids ('" + id + "')");
    }
    if (va == it->second) {
      out.gold[id] = va;
      continue;
    }
    out.conflicts.push_back(id);
    auto r = resolution.find(id);
    if (r == resolution.end()) {
      unresolved.push_back(id);
    } else {
      out.gold[id] = r->second;
    }
  }
  if (!unresolved.empty()) {
    std::string msg = "unresolved label conflicts:";
    for (const auto& id : unresolved) msg += " " + id;
    throw std::runtime_error(msg);
  }
  out.disagreement_rate =
      a.empty() ? 0.0 : static_cast<double>(out.conflicts.size()) / static_cast<double>(a.size());
  return out;
}

}  // namespace sitewatch
