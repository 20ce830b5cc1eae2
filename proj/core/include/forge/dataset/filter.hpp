#pragma once

#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/domain/types.hpp"

namespace forge::dataset {

enum class Verdict { Keep, Drop, Repair };
std::string_view to_string(Verdict v);

/// Rule ids, in the order they are applied.
inline constexpr std::string_view kRuleFailedResponse = "failed_response";
inline constexpr std::string_view kRuleLanguage = "language";
inline constexpr std::string_view kRuleAssistantTone = "assistant_tone";
inline constexpr std::string_view kRuleStageDirection = "stage_direction";
inline constexpr std::string_view kRuleExplanatoryWrapper = "explanatory_wrapper";
inline constexpr std::string_view kRuleModalFiller = "modal_filler";
inline constexpr std::string_view kRuleStructure = "structure";

/// Phrase and pattern lists. Phrases match case-insensitively as
/// substrings; patterns are ECMAScript regular expressions (case-insensitive).
struct FilterConfig {
  std::vector<std::string> failed_markers;
  std::vector<std::string> assistant_phrases;
  std::vector<std::string> stage_patterns;
  std::vector<std::string> wrapper_prefixes;
  std::vector<std::string> wrapper_suffixes;
  std::vector<std::string> modal_fillers;
  /// Minimum share of letters from the expected script.
  double language_threshold = 0.8;
  bool modal_filler_rule = true;

  static FilterConfig defaults();
  /// defaults() with any list present in `j` replaced.
  static FilterConfig from_json(const nlohmann::json& j);
};

/// Language guessed from letter scripts, or nullopt when neither script
/// reaches the threshold. Text without letters yields `fallback`.
std::optional<Language> detect_language(std::string_view text, Language fallback, double threshold = 0.8);

struct Finding {
  int turn_index = 0;
  std::string rule;
  /// Text removed by a repair, or the phrase that triggered a drop.
  std::string span;

  bool operator==(const Finding&) const = default;
};

struct FilterOutcome {
  Verdict verdict = Verdict::Keep;
  /// Distinct rule ids that fired, in rule order.
  std::vector<std::string> reasons;
  std::optional<Dialogue> repaired_dialogue;
  std::vector<Finding> findings;
};

nlohmann::json to_json(const FilterOutcome& o, const std::string& dialogue_id);

/// Compiled rule set; immutable and shareable across threads.
class DialogueFilter {
 public:
  explicit DialogueFilter(FilterConfig config = FilterConfig::defaults());

  /// Drops on failed responses, wrong language or assistant tone; repairs
  /// stage directions, explanatory wrappers and filler openers by deleting
  /// the spans until nothing more changes. A turn emptied by repair drops
  /// the dialogue. Applying the filter to a Keep or Repair result yields
  /// Keep with no changes.
  FilterOutcome filter(const Dialogue& dialogue) const;

  /// Repairs one utterance; findings are appended with `turn_index`.
  std::string repair_text(const std::string& text, int turn_index, std::vector<Finding>* findings) const;

  const FilterConfig& config() const { return config_; }

 private:
  std::optional<Finding> drop_check(const std::string& text, Language language, int turn_index) const;

  FilterConfig config_;
  std::vector<std::regex> stage_;
  std::vector<std::regex> prefixes_;
  std::vector<std::regex> suffixes_;
  std::vector<std::regex> fillers_;
};

FilterOutcome filter_dialogue(const Dialogue& dialogue, const FilterConfig& config = FilterConfig::defaults());

}  // namespace forge::dataset
