#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "sitewatch/features/tokenizer.hpp"

namespace sitewatch {

enum class VectorizerMode { tfidf, hashed };

std::string to_string(VectorizerMode mode);
VectorizerMode parse_vectorizer_mode(const std::string& text);

// Text block of the feature vector. Both modes L2-normalize the output;
// an all-zero vector stays zero.
//   tfidf:  vocabulary = tokens with document frequency >= 2,
//           idf = ln((1 + N) / (1 + df)) + 1, value = count * idf.
//   hashed: value = count of tokens whose FNV-1a hash lands in the bucket.
class TextVectorizer {
 public:
  static constexpr std::size_t kDefaultHashedDim = 256;

  static TextVectorizer fit(const std::vector<std::string>& documents, VectorizerMode mode,
                            std::size_t hashed_dim = kDefaultHashedDim);

  std::vector<double> transform(const std::string& text) const;
  std::vector<double> transform_tokens(const std::vector<std::string>& tokens) const;

  VectorizerMode mode() const { return mode_; }
  std::size_t dimension() const { return dim_; }
  const std::vector<std::string>& vocabulary() const { return vocab_; }
  const std::vector<double>& idf() const { return idf_; }
  std::size_t document_count() const { return n_docs_; }

  void write(std::ostream& out) const;
  static TextVectorizer read(std::istream& in);

  friend bool operator==(const TextVectorizer& a, const TextVectorizer& b) {
    return a.mode_ == b.mode_ && a.dim_ == b.dim_ && a.vocab_ == b.vocab_ && a.idf_ == b.idf_;
  }

 private:
  VectorizerMode mode_ = VectorizerMode::hashed;
  std::size_t dim_ = kDefaultHashedDim;
  std::size_t n_docs_ = 0;
  std::vector<std::string> vocab_;  // sorted
  std::vector<double> idf_;
  std::unordered_map<std::string, std::size_t> index_;
  Tokenizer tokenizer_;
};

}  // namespace sitewatch
