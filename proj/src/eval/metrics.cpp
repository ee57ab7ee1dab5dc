#include "sitewatch/eval/metrics.hpp"

#include <stdexcept>

#include "sitewatch/postprocess/keywords.hpp"

namespace sitewatch {

MetricsReport compute_metrics(std::span<const int> predicted, std::span<const int> gold) {
  if (predicted.size() != gold.size()) throw std::invalid_argument("prediction/gold length mismatch");
  if (predicted.empty()) throw std::invalid_argument("cannot compute metrics on an empty set");
  MetricsReport r;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const int p = predicted[i];
    const int g = gold[i];
    if ((p != 0 && p != 1) || (g != 0 && g != 1)) throw std::invalid_argument("labels must be 0 or 1");
    if (p == 1 && g == 1) ++r.tp;
    else if (p == 1) ++r.fp;
    else if (g == 1) ++r.fn;
    else ++r.tn;
  }
  const double n = static_cast<double>(predicted.size());
  r.accuracy = static_cast<double>(r.tp + r.tn) / n;
  if (r.tp + r.fp > 0) {
    r.precision = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
  } else {
    r.degenerate = true;
  }
  if (r.tp + r.fn > 0) {
    r.recall = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
  } else {
    r.degenerate = true;
  }
  if (r.precision + r.recall > 0.0) {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  } else {
    r.degenerate = true;
  }
  return r;
}

int keyword_baseline(const Article& article, const std::vector<std::string>& keywords, std::size_t k) {
  const PhraseMatcher matcher(keywords);
  const auto hits = matcher.distinct_matches(article);
  return hits.size() > k ? 1 : 0;
}

}  // namespace sitewatch
