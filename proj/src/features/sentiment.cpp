#include "sitewatch/features/sentiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sitewatch/features/tokenizer.hpp"

namespace sitewatch {

extern const char* const kBundledLexicon;

SentimentLexicon SentimentLexicon::parse(std::istream& in) {
  SentimentLexicon lex;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) + ": expected token<TAB>polarity");
    }
    double value = 0.0;
    try {
      value = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("lexicon line " + std::to_string(line_no) + ": bad polarity");
    }
    lex.add(to_lower(line.substr(0, tab)), value);
  }
  return lex;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon " + path.string());
  return parse(in);
}

const SentimentLexicon& SentimentLexicon::bundled() {
  static const SentimentLexicon lex = [] {
    std::istringstream in(kBundledLexicon);
    return parse(in);
  }();
  return lex;
}

void SentimentLexicon::add(const std::string& token, double polarity) {
  if (!(polarity >= -1.0 && polarity <= 1.0)) {
    throw std::invalid_argument("polarity for '" + token + "' outside [-1, 1]");
  }
  entries_[token] = polarity;
}

std::optional<double> SentimentLexicon::polarity(const std::string& token) const {
  auto it = entries_.find(token);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void SentimentLexicon::write(std::ostream& out) const {
  char buf[64];
  for (const auto& [token, value] : entries_) {
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out << token << '\t' << buf << '\n';
  }
}

double text_polarity(const std::string& text, const SentimentLexicon& lexicon) {
  static const Tokenizer tokenizer(true, nullptr);
  double sum = 0.0;
  int matched = 0;
  for (const auto& tok : tokenizer.tokenize(text)) {
    if (auto p = lexicon.polarity(tok)) {
      sum += *p;
      ++matched;
    }
  }
  if (matched == 0) return 0.0;
  return std::clamp(sum / matched, -1.0, 1.0);
}

std::array<double, 3> sentiment_scores(const Article& article, const SentimentLexicon& lexicon) {
  return {text_polarity(article.title, lexicon), text_polarity(article.description, lexicon),
          text_polarity(article.content, lexicon)};
}

}  // namespace sitewatch
