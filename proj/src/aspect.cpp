#include "argrec/aspect.hpp"

#include <fstream>
#include <istream>
#include <tuple>

#include "argrec/error.hpp"

namespace argrec::aspect {

namespace {

std::string trim(const std::string& s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::string join(const std::vector<std::string>& tokens, std::size_t first, std::size_t count) {
  std::string out;
  for (std::size_t i = first; i < first + count; ++i) {
    if (i > first) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace

SentimentLexicon SentimentLexicon::parse(std::istream& in) {
  SentimentLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError(line_no, "expected term<TAB>label");
    auto tokens = corpus::tokenize(line.substr(0, tab));
    if (tokens.size() != 1) throw FormatError(line_no, "sentiment terms must be single tokens");
    const auto& term = tokens.front();
    auto label = trim(line.substr(tab + 1));
    if (lex.terms.count(term) != 0 || lex.negations.count(term) != 0) {
      throw FormatError(line_no, "duplicate term '" + term + "'");
    }
    if (label == "negation") {
      lex.negations.insert(term);
    } else if (label == "positive") {
      lex.terms.emplace(term, Polarity::positive);
    } else if (label == "negative") {
      lex.terms.emplace(term, Polarity::negative);
    } else {
      throw FormatError(line_no, "unknown label '" + label + "'");
    }
  }
  return lex;
}

SentimentLexicon SentimentLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return parse(in);
}

Classifier::Classifier(Mode mode, corpus::FineGrainedLexicon lexicon, SentimentLexicon sentiment)
    : mode_(mode), lexicon_(std::move(lexicon)), sentiment_(std::move(sentiment)) {
  for (const auto& neg : sentiment_.negations) {
    if (sentiment_.terms.count(neg) != 0) {
      throw Error(ErrorCode::validation, "'" + neg + "' is both a sentiment and a negation term");
    }
  }
  for (const auto& [term, feature] : lexicon_.entries()) {
    max_term_tokens_ = std::max(max_term_tokens_, corpus::tokenize(term).size());
  }
}

AspectMatch Classifier::classify_aspect(std::string_view text) const {
  auto tokens = corpus::tokenize(text);
  AspectMatch best;
  // (length desc, code asc, position asc)
  std::tuple<std::size_t, std::size_t, std::size_t> best_key{0, 0, 0};
  for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
    auto longest = std::min(max_term_tokens_, tokens.size() - pos);
    for (std::size_t len = longest; len >= 1; --len) {
      auto key = join(tokens, pos, len);
      auto feature = lexicon_.lookup(key);
      if (!feature) continue;
      auto code = feature_code(*feature);
      bool better = !best.feature || len > std::get<0>(best_key) ||
                    (len == std::get<0>(best_key) && code < std::get<1>(best_key));
      if (better) {
        best = AspectMatch{feature, key};
        best_key = {len, code, pos};
      }
      break;  // shorter matches at this position cannot win
    }
  }
  return best;
}

Polarity Classifier::classify_polarity(std::string_view text) const {
  auto tokens = corpus::tokenize(text);
  long score = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = sentiment_.terms.find(tokens[i]);
    if (it == sentiment_.terms.end() || it->second == Polarity::neutral) continue;
    int sign = it->second == Polarity::positive ? 1 : -1;
    auto window_start = i >= kNegationWindow ? i - kNegationWindow : 0;
    for (std::size_t k = window_start; k < i; ++k) {
      if (sentiment_.negations.count(tokens[k]) != 0) {
        sign = -sign;
        break;
      }
    }
    score += sign;
  }
  if (score > 0) return Polarity::positive;
  if (score < 0) return Polarity::negative;
  return Polarity::neutral;
}

Classification Classifier::classify(const corpus::RawSentence& sentence) const {
  auto rule = classify_aspect(sentence.text);
  Classification out{rule.feature, Polarity::neutral, rule.term};

  std::optional<Feature> gold_feature;
  if (mode_ == Mode::gold_passthrough && sentence.gold_aspect) {
    gold_feature = parse_feature(*sentence.gold_aspect);
    if (!gold_feature) gold_feature = lexicon_.lookup(*sentence.gold_aspect);
  }
  if (gold_feature) {
    out.feature = gold_feature;
    auto gold_term = corpus::normalize_term(*sentence.gold_aspect);
    if (lexicon_.lookup(gold_term) && corpus::contains_term(sentence.text, gold_term)) {
      out.term = gold_term;
    } else if (rule.feature == gold_feature) {
      out.term = rule.term;
    } else {
      out.term.reset();
    }
  }

  if (mode_ == Mode::gold_passthrough && sentence.gold_polarity) {
    out.polarity = *sentence.gold_polarity;
  } else {
    out.polarity = classify_polarity(sentence.text);
  }
  return out;
}

}  // namespace argrec::aspect
