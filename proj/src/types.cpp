#include "argrec/error.hpp"
#include "argrec/types.hpp"

#include <algorithm>

namespace argrec {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "room",     "price",    "staff",              "location", "facilities",
    "bathroom", "ambience", "food_and_beverages", "comfort",  "checking",
};

}  // namespace

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::io: return "io_error";
    case ErrorCode::format: return "format_error";
    case ErrorCode::validation: return "validation_error";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::index_out_of_range: return "index_out_of_range";
    case ErrorCode::model_not_trained: return "model_not_trained";
    case ErrorCode::checkpoint_version: return "checkpoint_version";
    case ErrorCode::unknown_session: return "unknown_session";
    case ErrorCode::unknown_item: return "unknown_item";
    case ErrorCode::unknown_feature: return "unknown_feature";
    case ErrorCode::unknown_construct: return "unknown_construct";
    case ErrorCode::move_not_allowed: return "move_not_allowed";
    case ErrorCode::no_such_term: return "no_such_term";
    case ErrorCode::style_mismatch: return "style_mismatch";
    case ErrorCode::empty_input: return "empty_input";
    case ErrorCode::degenerate_input: return "degenerate_input";
    case ErrorCode::no_gold_labels: return "no_gold_labels";
    case ErrorCode::storage: return "storage_error";
    case ErrorCode::bind: return "bind_error";
  }
  return "unknown";
}

std::string_view feature_name(Feature f) noexcept { return kFeatureNames[feature_code(f)]; }

std::string feature_label(Feature f) {
  std::string label(feature_name(f));
  std::replace(label.begin(), label.end(), '_', ' ');
  return label;
}

std::optional<Feature> parse_feature(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kFeatureNames[i] == name) return feature_from_code(i);
  }
  return std::nullopt;
}

std::string_view polarity_name(Polarity p) noexcept {
  switch (p) {
    case Polarity::positive: return "positive";
    case Polarity::negative: return "negative";
    case Polarity::neutral: return "neutral";
  }
  return "neutral";
}

std::optional<Polarity> parse_polarity(std::string_view name) noexcept {
  if (name == "positive") return Polarity::positive;
  if (name == "negative") return Polarity::negative;
  if (name == "neutral") return Polarity::neutral;
  return std::nullopt;
}

}  // namespace argrec
