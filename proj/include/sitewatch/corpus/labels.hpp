#pragma once

#include <map>
#include <string>
#include <vector>

namespace sitewatch {

// article_id -> binary label, for one label dimension.
using BinaryLabels = std::map<std::string, int>;

struct LabelResolution {
  BinaryLabels gold;
  std::vector<std::string> conflicts;  // ids where the annotators disagreed
  double disagreement_rate = 0.0;
};

// Merges two annotators' labels for one dimension. Agreements pass through;
// each disagreement takes the value from `resolution`, and a disagreement
// without a resolution entry is an error listing every unresolved id.
// Conservation and infrastructure labels are resolved independently.
LabelResolution resolve_labels(const BinaryLabels& a, const BinaryLabels& b,
                               const BinaryLabels& resolution);

}  // namespace sitewatch
