#include "sitewatch/features/vectorizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "sitewatch/util/hash.hpp"

namespace sitewatch {

std::string to_string(VectorizerMode mode) {
  return mode == VectorizerMode::tfidf ? "tfidf" : "hashed";
}

VectorizerMode parse_vectorizer_mode(const std::string& text) {
  if (text == "tfidf") return VectorizerMode::tfidf;
  if (text == "hashed") return VectorizerMode::hashed;
  throw std::invalid_argument("unknown vectorizer mode '" + text + "'");
}

TextVectorizer TextVectorizer::fit(const std::vector<std::string>& documents, VectorizerMode mode,
                                   std::size_t hashed_dim) {
  TextVectorizer v;
  v.mode_ = mode;
  v.n_docs_ = documents.size();
  if (mode == VectorizerMode::hashed) {
    if (hashed_dim == 0) throw std::invalid_argument("hashed dimension must be >= 1");
    v.dim_ = hashed_dim;
    return v;
  }
  if (documents.empty()) throw std::invalid_argument("cannot fit a tfidf vectorizer on an empty corpus");
  std::map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    const auto tokens = v.tokenizer_.tokenize(doc);
    const std::set<std::string> unique(tokens.begin(), tokens.end());
    for (const auto& t : unique) ++df[t];
  }
  const double n = static_cast<double>(documents.size());
  for (const auto& [token, count] : df) {
    if (count < 2) continue;
    v.index_.emplace(token, v.vocab_.size());
    v.vocab_.push_back(token);
    v.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  v.dim_ = v.vocab_.size();
  return v;
}

std::vector<double> TextVectorizer::transform(const std::string& text) const {
  return transform_tokens(tokenizer_.tokenize(text));
}

std::vector<double> TextVectorizer::transform_tokens(const std::vector<std::string>& tokens) const {
  std::vector<double> out(dim_, 0.0);
  if (dim_ == 0) return out;
  if (mode_ == VectorizerMode::hashed) {
    for (const auto& t : tokens) out[fnv1a64(t) % dim_] += 1.0;
  } else {
    for (const auto& t : tokens) {
      auto it = index_.find(t);
      if (it != index_.end()) out[it->second] += 1.0;
    }
    for (std::size_t i = 0; i < dim_; ++i) out[i] *= idf_[i];
  }
  double norm = 0.0;
  for (double x : out) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : out) x /= norm;
  }
  return out;
}

void TextVectorizer::write(std::ostream& out) const {
  out << "vectorizer " << to_string(mode_) << ' ' << dim_ << ' ' << n_docs_ << '\n';
  char buf[64];
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", idf_[i]);
    out << vocab_[i] << ' ' << buf << '\n';
  }
}

TextVectorizer TextVectorizer::read(std::istream& in) {
  std::string tag, mode;
  TextVectorizer v;
  if (!(in >> tag >> mode >> v.dim_ >> v.n_docs_) || tag != "vectorizer") {
    throw std::runtime_error("bad vectorizer header");
  }
  v.mode_ = parse_vectorizer_mode(mode);
  if (v.mode_ == VectorizerMode::tfidf) {
    for (std::size_t i = 0; i < v.dim_; ++i) {
      std::string token;
      double idf = 0.0;
      if (!(in >> token >> idf)) throw std::runtime_error("truncated vectorizer vocabulary");
      v.index_.emplace(token, i);
      v.vocab_.push_back(std::move(token));
      v.idf_.push_back(idf);
    }
  }
  return v;
}

}  // namespace sitewatch
