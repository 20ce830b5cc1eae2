#include "forge/domain/types.hpp"

#include <array>
#include <utility>

#include "forge/util/error.hpp"

namespace forge {

namespace {

template <typename E, std::size_t N>
E parse_enum(std::string_view s, const std::array<std::pair<E, std::string_view>, N>& names,
             std::string_view what) {
  for (const auto& [value, name] : names) {
    if (name == s) return value;
  }
  throw Error(Errc::SchemaError, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

template <typename E, std::size_t N>
std::string_view enum_name(E v, const std::array<std::pair<E, std::string_view>, N>& names) {
  for (const auto& [value, name] : names) {
    if (value == v) return name;
  }
  return "?";
}

constexpr std::array<std::pair<Category, std::string_view>, 3> kCategories{{
    {Category::Fictional, "Fictional"},
    {Category::HistoricalPublic, "HistoricalPublic"},
    {Category::HypotheticalRealLife, "HypotheticalRealLife"},
}};
constexpr std::array<std::pair<Language, std::string_view>, 2> kLanguages{{
    {Language::En, "en"},
    {Language::Zh, "zh"},
}};
constexpr std::array<std::pair<Split, std::string_view>, 3> kSplits{{
    {Split::Train, "Train"},
    {Split::InTest, "InTest"},
    {Split::OutTest, "OutTest"},
}};
constexpr std::array<std::pair<ImageKind, std::string_view>, 2> kImageKinds{{
    {ImageKind::Generic, "Generic"},
    {ImageKind::CharacterRelated, "CharacterRelated"},
}};
constexpr std::array<std::pair<Scenario, std::string_view>, 3> kScenarios{{
    {Scenario::Commentary, "Commentary"},
    {Scenario::HumanRole, "HumanRole"},
    {Scenario::InterRole, "InterRole"},
}};

}  // namespace

std::string_view to_string(Category v) { return enum_name(v, kCategories); }
std::string_view to_string(Language v) { return enum_name(v, kLanguages); }
std::string_view to_string(Split v) { return enum_name(v, kSplits); }
std::string_view to_string(ImageKind v) { return enum_name(v, kImageKinds); }
std::string_view to_string(Scenario v) { return enum_name(v, kScenarios); }

Category parse_category(std::string_view s) { return parse_enum(s, kCategories, "category"); }
Language parse_language(std::string_view s) { return parse_enum(s, kLanguages, "language"); }
Split parse_split(std::string_view s) { return parse_enum(s, kSplits, "split"); }
ImageKind parse_image_kind(std::string_view s) { return parse_enum(s, kImageKinds, "image kind"); }
Scenario parse_scenario(std::string_view s) { return parse_enum(s, kScenarios, "scenario"); }

std::string_view language_name(Language v) { return v == Language::Zh ? "Chinese" : "English"; }

std::string render_profile(const Profile& profile) {
  std::string out;
  out += "Brief Introduction: " + profile.brief_introduction + "\n";
  out += "Personality: " + profile.personality + "\n";
  out += "Life Story: " + profile.life_story + "\n";
  out += "Main Interpersonal Relationships: " + profile.relationships + "\n";
  out += "Catchphrases:";
  for (const auto& phrase : profile.catchphrases) out += "\n- " + phrase;
  return out;
}

std::string prompt_profile_text(const Profile& profile) {
  return profile.simplified ? *profile.simplified : render_profile(profile);
}

Speaker Speaker::parse(std::string_view s) {
  if (s == kHumanUser) return human();
  if (s.empty()) throw Error(Errc::SchemaError, "empty speaker");
  return character(std::string(s));
}

}  // namespace forge
