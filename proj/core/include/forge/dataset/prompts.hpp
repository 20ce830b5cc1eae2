#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace forge::dataset {

/// Generation prompt bodies. Each is rendered with render_template; the
/// placeholders each one may use are listed beside it.
struct GenerationPrompts {
  std::string system;
  std::string meta;               // {count}
  std::string expand;             // {name} {gender} {personality_brief} {background_brief}
  std::string summarize;          // {name} {series} {source}
  std::string summarize_chunk;    // {name} {series} {source} {part} {parts}
  std::string merge;              // {name} {series} {partials}
  std::string simplify;           // {max_chars} {profile} {attempt} {previous_chars}
  std::string dialogue_system;    // {role_name} {role_series}
  std::string commentary;         // {role_name} {role_series} {role_profile} {image_notes} {language}
  std::string human_role;         // ... {turn_pairs}
  std::string inter_role;         // ... {other_role_name} {other_role_profile} {turn_pairs}

  static GenerationPrompts defaults();
  /// defaults() with any field present in `j` replaced.
  static GenerationPrompts from_json(const nlohmann::json& j);
};

}  // namespace forge::dataset
