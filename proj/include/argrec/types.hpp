#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace argrec {

/// The ten general hotel features. Codes are stable and ordered.
enum class Feature : std::uint8_t {
  room = 0,
  price,
  staff,
  location,
  facilities,
  bathroom,
  ambience,
  food_and_beverages,
  comfort,
  checking,
};

inline constexpr std::size_t kFeatureCount = 10;

inline constexpr std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::room,     Feature::price,    Feature::staff,
    Feature::location, Feature::facilities, Feature::bathroom,
    Feature::ambience, Feature::food_and_beverages, Feature::comfort,
    Feature::checking,
};

constexpr std::size_t feature_code(Feature f) noexcept { return static_cast<std::size_t>(f); }
constexpr Feature feature_from_code(std::size_t code) noexcept { return static_cast<Feature>(code); }

std::string_view feature_name(Feature f) noexcept;
/// Human-readable label, e.g. "food and beverages".
std::string feature_label(Feature f);
std::optional<Feature> parse_feature(std::string_view name) noexcept;

enum class Polarity : std::uint8_t { positive, negative, neutral };

std::string_view polarity_name(Polarity p) noexcept;
std::optional<Polarity> parse_polarity(std::string_view name) noexcept;

}  // namespace argrec
