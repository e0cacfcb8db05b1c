#include "argrec/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "argrec/aspect.hpp"
#include "argrec/error.hpp"

namespace argrec::corpus {

using nlohmann::json;

namespace {

bool is_token_char(unsigned char c) { return std::isalnum(c) != 0 || c >= 0x80; }

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r\n\f\v");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(begin, end - begin + 1));
}

std::string required_string(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw FormatError(line, std::string("missing or non-string field '") + key + "'");
  }
  auto value = it->get<std::string>();
  if (trim(value).empty()) throw FormatError(line, std::string("empty field '") + key + "'");
  return value;
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw std::invalid_argument(std::string("non-string field '") + key + "'");
  return it->get<std::string>();
}

Review review_from_json(const json& j, std::size_t line) {
  if (!j.is_object()) throw FormatError(line, "expected a JSON object");
  Review r;
  r.review_id = required_string(j, "review_id", line);
  r.item_id = required_string(j, "item_id", line);
  r.user_id = required_string(j, "user_id", line);

  auto rating = j.find("rating");
  if (rating == j.end() || !rating->is_number_integer()) {
    throw FormatError(line, "missing or non-integer 'rating'");
  }
  auto value = rating->get<long long>();
  if (value < 1 || value > 5) {
    throw FormatError(line, "rating " + std::to_string(value) + " outside 1..5");
  }
  r.rating = static_cast<int>(value);

  auto sentences = j.find("sentences");
  if (sentences == j.end() || !sentences->is_array() || sentences->empty()) {
    throw FormatError(line, "'sentences' must be a non-empty array");
  }
  for (const auto& s : *sentences) {
    if (!s.is_object()) throw FormatError(line, "sentence must be an object");
    RawSentence raw;
    auto text = s.find("text");
    if (text == s.end() || !text->is_string() || trim(text->get<std::string>()).empty()) {
      throw FormatError(line, "sentence text missing or blank");
    }
    raw.text = text->get<std::string>();
    try {
      raw.gold_aspect = optional_string(s, "gold_aspect");
      if (auto pol = optional_string(s, "gold_polarity")) {
        raw.gold_polarity = parse_polarity(*pol);
        if (!raw.gold_polarity) throw std::invalid_argument("unknown gold_polarity '" + *pol + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw FormatError(line, e.what());
    }
    r.sentences.push_back(std::move(raw));
  }
  return r;
}

json review_to_json(const Review& r) {
  json sentences = json::array();
  for (const auto& s : r.sentences) {
    json js = {{"text", s.text}};
    if (s.gold_aspect) js["gold_aspect"] = *s.gold_aspect;
    if (s.gold_polarity) js["gold_polarity"] = polarity_name(*s.gold_polarity);
    sentences.push_back(std::move(js));
  }
  return json{{"review_id", r.review_id}, {"item_id", r.item_id}, {"user_id", r.user_id},
              {"rating", r.rating}, {"sentences", std::move(sentences)}};
}

template <typename F>
void for_each_line(std::istream& in, F&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    fn(line, line_no);
  }
}

json parse_json_line(const std::string& line, std::size_t line_no) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(line_no, std::string("invalid JSON: ") + e.what());
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_token_char(c)) {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::string normalize_term(std::string_view term) {
  std::string out;
  for (const auto& tok : tokenize(term)) {
    if (!out.empty()) out.push_back(' ');
    out += tok;
  }
  return out;
}

bool contains_term(std::string_view text, std::string_view term) {
  auto needle = tokenize(term);
  if (needle.empty()) return false;
  auto hay = tokenize(text);
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

void FineGrainedLexicon::add(std::string_view term, Feature feature) {
  auto key = normalize_term(term);
  if (key.empty()) throw Error(ErrorCode::validation, "empty lexicon term");
  if (!entries_.emplace(key, feature).second) {
    throw Error(ErrorCode::validation, "duplicate lexicon term '" + key + "'");
  }
}

FineGrainedLexicon FineGrainedLexicon::parse(std::istream& in) {
  FineGrainedLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw FormatError(line_no, "expected term<TAB>category");
    auto category = trim(std::string_view(line).substr(tab + 1));
    auto feature = parse_feature(category);
    if (!feature) throw FormatError(line_no, "unknown category '" + category + "'");
    try {
      lex.add(std::string_view(line).substr(0, tab), *feature);
    } catch (const Error& e) {
      throw FormatError(line_no, e.what());
    }
  }
  return lex;
}

FineGrainedLexicon FineGrainedLexicon::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse(in);
}

std::optional<Feature> FineGrainedLexicon::lookup(std::string_view term) const {
  auto it = entries_.find(normalize_term(term));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<Feature> map_fine_to_general(std::string_view term, const FineGrainedLexicon& lex) {
  return lex.lookup(term);
}

std::vector<Review> parse_corpus(std::istream& in) {
  std::vector<Review> reviews;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    reviews.push_back(review_from_json(parse_json_line(line, line_no), line_no));
  });
  return reviews;
}

std::vector<Review> parse_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<Review>& reviews) {
  for (const auto& r : reviews) out << review_to_json(r).dump() << '\n';
}

std::vector<SentenceRecord> build_sentence_records(const std::vector<Review>& reviews,
                                                   const aspect::Classifier& classifier) {
  std::vector<SentenceRecord> records;
  for (const auto& review : reviews) {
    for (const auto& sentence : review.sentences) {
      auto c = classifier.classify(sentence);
      records.push_back(SentenceRecord{review.review_id, review.item_id, review.user_id,
                                       sentence.text, c.feature, c.polarity, std::move(c.term)});
    }
  }
  return records;
}

std::vector<SentenceRecord> read_records(std::istream& in) {
  std::vector<SentenceRecord> records;
  for_each_line(in, [&](const std::string& line, std::size_t line_no) {
    auto j = parse_json_line(line, line_no);
    if (!j.is_object()) throw FormatError(line_no, "expected a JSON object");
    SentenceRecord r;
    r.review_id = required_string(j, "review_id", line_no);
    r.item_id = required_string(j, "item_id", line_no);
    r.user_id = required_string(j, "user_id", line_no);
    r.text = required_string(j, "text", line_no);
    try {
      if (auto f = optional_string(j, "feature")) {
        r.feature = parse_feature(*f);
        if (!r.feature) throw std::invalid_argument("unknown feature '" + *f + "'");
      }
      auto pol = optional_string(j, "polarity");
      auto parsed = pol ? parse_polarity(*pol) : std::nullopt;
      if (!parsed) throw std::invalid_argument("missing or unknown polarity");
      r.polarity = *parsed;
      r.fine_grained_term = optional_string(j, "term");
    } catch (const std::invalid_argument& e) {
      throw FormatError(line_no, e.what());
    }
    records.push_back(std::move(r));
  });
  return records;
}

std::vector<SentenceRecord> read_records(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_records(in);
}

void write_records(std::ostream& out, const std::vector<SentenceRecord>& records) {
  for (const auto& r : records) {
    json j = {{"review_id", r.review_id}, {"item_id", r.item_id}, {"user_id", r.user_id},
              {"text", r.text},
              {"feature", r.feature ? json(feature_name(*r.feature)) : json(nullptr)},
              {"polarity", polarity_name(r.polarity)},
              {"term", r.fine_grained_term ? json(*r.fine_grained_term) : json(nullptr)}};
    out << j.dump() << '\n';
  }
}

}  // namespace argrec::corpus
