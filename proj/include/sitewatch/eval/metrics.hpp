#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sitewatch/corpus/corpus.hpp"

namespace sitewatch {

// Binary metrics for the positive (relevant) class.
struct MetricsReport {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when precision, recall or F1 had a zero denominator and was reported as 0.
  bool degenerate = false;
};

// Throws on empty input or a length mismatch.
MetricsReport compute_metrics(std::span<const int> predicted, std::span<const int> gold);

// 1 iff more than `k` distinct keyword-list entries occur in the article
// (case-insensitive whole-phrase match over title, description and content).
int keyword_baseline(const Article& article, const std::vector<std::string>& keywords, std::size_t k);

}  // namespace sitewatch
