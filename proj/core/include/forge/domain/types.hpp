#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

enum class Category { Fictional, HistoricalPublic, HypotheticalRealLife };
enum class Language { En, Zh };
enum class Split { Train, InTest, OutTest };
enum class ImageKind { Generic, CharacterRelated };
enum class Scenario { Commentary, HumanRole, InterRole };

std::string_view to_string(Category v);
std::string_view to_string(Language v);
std::string_view to_string(Split v);
std::string_view to_string(ImageKind v);
std::string_view to_string(Scenario v);

// Parsers accept exactly the names produced by to_string and throw
// Errc::SchemaError otherwise.
Category parse_category(std::string_view s);
Language parse_language(std::string_view s);
Split parse_split(std::string_view s);
ImageKind parse_image_kind(std::string_view s);
Scenario parse_scenario(std::string_view s);

/// English display name ("English"/"Chinese") used inside prompts.
std::string_view language_name(Language v);

struct Profile {
  std::string brief_introduction;
  std::string personality;
  std::string life_story;
  std::string relationships;
  std::vector<std::string> catchphrases;
  std::optional<std::string> simplified;

  bool operator==(const Profile&) const = default;
};

/// The five sections joined under their headings; this is the text that
/// `simplified` must not exceed.
std::string render_profile(const Profile& profile);

/// Simplified text when present, otherwise the full rendering.
std::string prompt_profile_text(const Profile& profile);

struct Character {
  std::string id;
  std::string name;
  std::string series;
  Category category = Category::Fictional;
  Language language = Language::En;
  Split split = Split::Train;
  Profile profile;

  bool operator==(const Character&) const = default;
};

struct MetaInfo {
  std::string name;
  std::string gender;
  std::string personality_brief;
  std::string background_brief;

  bool operator==(const MetaInfo&) const = default;
};

struct ImageAnnotation {
  std::vector<std::string> characters;
  std::string place;
  std::string scene;

  bool operator==(const ImageAnnotation&) const = default;
};

struct ImageRecord {
  std::string id;
  std::string uri;
  ImageKind kind = ImageKind::Generic;
  std::optional<ImageAnnotation> annotation;
  std::optional<std::string> owner_character;

  bool operator==(const ImageRecord&) const = default;
};

/// Either the identity-less human user or a character id.
class Speaker {
 public:
  static constexpr std::string_view kHumanUser = "HumanUser";

  static Speaker human() { return Speaker(); }
  static Speaker character(std::string id) { return Speaker(std::move(id)); }
  /// "HumanUser" maps to the human; anything else is a character id.
  static Speaker parse(std::string_view s);

  bool is_human() const { return character_id_.empty(); }
  const std::string& character_id() const { return character_id_; }
  std::string str() const { return is_human() ? std::string(kHumanUser) : character_id_; }

  bool operator==(const Speaker&) const = default;

 private:
  Speaker() = default;
  explicit Speaker(std::string id) : character_id_(std::move(id)) {}

  std::string character_id_;
};

struct Turn {
  Speaker speaker = Speaker::human();
  std::string text;
  int index = 0;

  bool operator==(const Turn&) const = default;
};

struct Dialogue {
  std::string id;
  Scenario scenario = Scenario::Commentary;
  std::string image;
  Speaker speaker_a = Speaker::human();
  std::string speaker_b;
  std::vector<Turn> turns;
  Language language = Language::En;
  Split split = Split::Train;

  bool operator==(const Dialogue&) const = default;
};

struct TrainingSample {
  std::string id;
  std::string dialogue_id;
  std::string image_id;
  int target_turn_index = 0;
  std::vector<Turn> context;
  std::string prompt;
  std::string target;

  bool operator==(const TrainingSample&) const = default;
};

struct TestSample : TrainingSample {
  std::string ground_truth;
  std::uint64_t rng_seed = 0;

  bool operator==(const TestSample&) const = default;
};

}  // namespace forge
