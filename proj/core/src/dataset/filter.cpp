#include "forge/dataset/filter.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "forge/domain/ids.hpp"
#include "forge/domain/validation.hpp"
#include "forge/util/error.hpp"
#include "forge/util/text.hpp"

namespace forge::dataset {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Keep: return "Keep";
    case Verdict::Drop: return "Drop";
    case Verdict::Repair: return "Repair";
  }
  return "?";
}

FilterConfig FilterConfig::defaults() {
  FilterConfig c;
  c.failed_markers = {
      "[no response]",
      "[error]",
      "request failed",
      "i'm sorry, but i can't",
      "i am sorry, but i cannot",
      "i'm sorry, i can't help",
      "i cannot fulfill",
      "i can't assist with",
      "i cannot assist with",
      "unable to generate",
      "\xE6\x8A\xB1\xE6\xAD\x89\xEF\xBC\x8C\xE6\x88\x91\xE6\x97\xA0\xE6\xB3\x95",  // 抱歉，我无法
      "\xE6\x97\xA0\xE6\xB3\x95\xE7\x94\x9F\xE6\x88\x90",                          // 无法生成
  };
  c.assistant_phrases = {
      "as an ai",
      "as a language model",
      "as an artificial intelligence",
      "as a virtual assistant",
      "as an assistant",
      "i am an ai",
      "i'm an ai",
      "i'm just an ai",
      "i am a language model",
      "i'm a language model",
      "ai language model",
      "\xE4\xBD\x9C\xE4\xB8\xBA\xE4\xB8\x80\xE4\xB8\xAA\xE4\xBA\xBA\xE5\xB7\xA5\xE6\x99\xBA\xE8\x83\xBD",  // 作为一个人工智能
      "\xE4\xBD\x9C\xE4\xB8\xBA\xE4\xBA\xBA\xE5\xB7\xA5\xE6\x99\xBA\xE8\x83\xBD",                          // 作为人工智能
      "\xE4\xBD\x9C\xE4\xB8\xBA\xE4\xB8\x80\xE4\xB8\xAA" "ai",                                            // 作为一个ai
      "\xE4\xBD\x9C\xE4\xB8\xBA" "ai",                                                                    // 作为ai
      "\xE6\x88\x91\xE6\x98\xAF\xE4\xB8\x80\xE4\xB8\xAA\xE4\xBA\xBA\xE5\xB7\xA5\xE6\x99\xBA\xE8\x83\xBD",  // 我是一个人工智能
      "\xE4\xBD\x9C\xE4\xB8\xBA\xE8\xAF\xAD\xE8\xA8\x80\xE6\xA8\xA1\xE5\x9E\x8B",                          // 作为语言模型
  };
  c.stage_patterns = {
      R"(\*[^*\n]{1,200}\*)",
      R"(\[[^\]\n]{1,200}\])",
      "\xEF\xBC\x88.{0,200}?\xEF\xBC\x89",  // （…）
      "\xE3\x80\x90.{0,200}?\xE3\x80\x91",  // 【…】
      R"(^\s*\([^()\n]{1,200}\))",
      R"(\([^()\n]{1,200}\)\s*$)",
  };
  c.wrapper_prefixes = {
      R"(^\s*(?:sure|certainly|of course|okay|ok)(?:[,!.])?\s+here(?:'s| is| are)\b[^:\n]{0,80}:\s*)",
      R"(^\s*here(?:'s| is)\s+(?:my|the|a|an)\s+(?:response|reply|answer|comment|commentary|dialogue)\b[^:\n]{0,80}:\s*)",
      R"(^\s*(?:response|reply|answer)\s*:\s*)",
      "^\\s*\xE4\xBB\xA5\xE4\xB8\x8B\xE6\x98\xAF.{0,60}?(?:\xEF\xBC\x9A|:)\\s*",  // 以下是…：
  };
  c.wrapper_suffixes = {
      R"(\s*i hope (?:this|that|my) (?:response|reply|answer|helps)[^\n]*$)",
      R"(\s*let me know if you (?:need|want|would like)[^\n]*$)",
      "\\s*\xE5\xB8\x8C\xE6\x9C\x9B(?:\xE8\xBF\x99\xE4\xB8\xAA|\xE4\xBB\xA5\xE4\xB8\x8A)?"
      "(?:\xE5\x9B\x9E\xE7\xAD\x94|\xE5\x9B\x9E\xE5\xA4\x8D)[^\\n]*$",  // 希望(这个|以上)?(回答|回复)…
  };
  c.modal_fillers = {
      R"(^\s*(?:ah+|oh+|ooh|hmm+|well|um+|uh+|ahem)\s*(?:[,!.]|\xE2\x80\xA6)+\s*)",
      "^\\s*(?:\xE5\x95\x8A|\xE5\x97\xAF|\xE5\x93\xA6|\xE5\x91\x83|\xE5\x94\x94)"
      "(?:\xEF\xBC\x8C|,|\xEF\xBC\x81|!|\xE3\x80\x82|\xE2\x80\xA6)+\\s*",  // 啊嗯哦呃唔 + ，,！!。…
  };
  return c;
}

FilterConfig FilterConfig::from_json(const nlohmann::json& j) {
  FilterConfig c = defaults();
  auto take = [&](const char* key, std::vector<std::string>& field) {
    if (j.contains(key)) field = j.at(key).get<std::vector<std::string>>();
  };
  take("failed_markers", c.failed_markers);
  take("assistant_phrases", c.assistant_phrases);
  take("stage_patterns", c.stage_patterns);
  take("wrapper_prefixes", c.wrapper_prefixes);
  take("wrapper_suffixes", c.wrapper_suffixes);
  take("modal_fillers", c.modal_fillers);
  c.language_threshold = j.value("language_threshold", c.language_threshold);
  c.modal_filler_rule = j.value("modal_filler_rule", c.modal_filler_rule);
  return c;
}

std::optional<Language> detect_language(std::string_view s, Language fallback, double threshold) {
  const auto p = text::script_profile(s);
  if (p.letters() == 0) return fallback;
  const double n = static_cast<double>(p.letters());
  if (static_cast<double>(p.latin) / n >= threshold) return Language::En;
  if (static_cast<double>(p.cjk) / n >= threshold) return Language::Zh;
  return std::nullopt;
}

nlohmann::json to_json(const FilterOutcome& o, const std::string& dialogue_id) {
  nlohmann::json findings = nlohmann::json::array();
  for (const auto& f : o.findings) findings.push_back({{"turn", f.turn_index}, {"rule", f.rule}, {"span", f.span}});
  nlohmann::json out{{"dialogue_id", dialogue_id},
                     {"verdict", to_string(o.verdict)},
                     {"reasons", o.reasons},
                     {"findings", std::move(findings)}};
  out["repaired_id"] = o.repaired_dialogue ? nlohmann::json(o.repaired_dialogue->id) : nlohmann::json(nullptr);
  return out;
}

namespace {

std::vector<std::regex> compile(const std::vector<std::string>& patterns, const char* list) {
  std::vector<std::regex> out;
  for (const auto& p : patterns) {
    try {
      out.emplace_back(p, std::regex::ECMAScript | std::regex::icase);
    } catch (const std::regex_error& e) {
      throw Error(Errc::ConfigError, std::string("bad ") + list + " pattern '" + p + "': " + e.what());
    }
  }
  return out;
}

bool ascii_letter(unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

/// Case-insensitive phrase search; an ASCII-letter phrase edge must not sit
/// inside a word ("as an ai" does not match "as an aide").
std::size_t find_phrase(std::string_view text, std::string_view phrase) {
  std::size_t from = 0;
  while (true) {
    const auto at = text::ifind(text, phrase, from);
    if (at == std::string_view::npos) return at;
    const bool left_ok = at == 0 || !ascii_letter(static_cast<unsigned char>(phrase.front())) ||
                         !ascii_letter(static_cast<unsigned char>(text[at - 1]));
    const auto end = at + phrase.size();
    const bool right_ok = end >= text.size() || !ascii_letter(static_cast<unsigned char>(phrase.back())) ||
                          !ascii_letter(static_cast<unsigned char>(text[end]));
    if (left_ok && right_ok) return at;
    from = at + 1;
  }
}

void add_reason(std::vector<std::string>& reasons, std::string_view rule) {
  if (std::find(reasons.begin(), reasons.end(), rule) == reasons.end()) reasons.emplace_back(rule);
}

int rule_rank(const std::string& rule) {
  static const std::array<std::string_view, 7> kOrder = {kRuleStructure,         kRuleFailedResponse, kRuleLanguage,
                                                         kRuleAssistantTone,     kRuleStageDirection,
                                                         kRuleExplanatoryWrapper, kRuleModalFiller};
  for (std::size_t i = 0; i < kOrder.size(); ++i) {
    if (kOrder[i] == rule) return static_cast<int>(i);
  }
  return static_cast<int>(kOrder.size());
}

}  // namespace

DialogueFilter::DialogueFilter(FilterConfig config)
    : config_(std::move(config)),
      stage_(compile(config_.stage_patterns, "stage")),
      prefixes_(compile(config_.wrapper_prefixes, "wrapper prefix")),
      suffixes_(compile(config_.wrapper_suffixes, "wrapper suffix")),
      fillers_(compile(config_.modal_fillers, "modal filler")) {
  if (!(config_.language_threshold > 0.5 && config_.language_threshold <= 1.0)) {
    throw Error(Errc::ConfigError, "language_threshold must be in (0.5, 1]");
  }
}

std::optional<Finding> DialogueFilter::drop_check(const std::string& text, Language language, int turn) const {
  if (text::trim(text).empty()) return Finding{turn, std::string(kRuleFailedResponse), ""};
  for (const auto& marker : config_.failed_markers) {
    if (find_phrase(text, marker) != std::string_view::npos) return Finding{turn, std::string(kRuleFailedResponse), marker};
  }
  const auto detected = detect_language(text, language, config_.language_threshold);
  if (!detected || *detected != language) {
    return Finding{turn, std::string(kRuleLanguage), detected ? std::string(to_string(*detected)) : "unknown"};
  }
  for (const auto& phrase : config_.assistant_phrases) {
    if (find_phrase(text, phrase) != std::string_view::npos) return Finding{turn, std::string(kRuleAssistantTone), phrase};
  }
  return std::nullopt;
}

std::string DialogueFilter::repair_text(const std::string& input, int turn, std::vector<Finding>* findings) const {
  std::string current = input;
  auto apply = [&](const std::vector<std::regex>& rules, std::string_view rule, bool capitalize) {
    bool changed = false;
    for (const auto& re : rules) {
      std::string out;
      std::size_t tail = 0;
      bool hit = false;
      for (auto it = std::sregex_iterator(current.begin(), current.end(), re); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        if (m.length(0) == 0) continue;
        hit = true;
        if (findings) findings->push_back(Finding{turn, std::string(rule), text::trim_copy(m.str(0))});
        out.append(current, tail, static_cast<std::size_t>(m.position(0)) - tail);
        out += ' ';
        tail = static_cast<std::size_t>(m.position(0) + m.length(0));
      }
      const std::string rest = current.substr(tail);
      if (!hit) continue;
      out += rest;
      const bool was_upper = !current.empty() && current.find_first_not_of(" \t") != std::string::npos &&
                             std::isupper(static_cast<unsigned char>(current[current.find_first_not_of(" \t")]));
      current = text::tidy_spacing(out);
      if (capitalize && was_upper && !current.empty() && current[0] >= 'a' && current[0] <= 'z') {
        current[0] = static_cast<char>(current[0] - 'a' + 'A');
      }
      changed = true;
    }
    return changed;
  };
  for (int guard = 0; guard < 64; ++guard) {
    bool changed = apply(stage_, kRuleStageDirection, false);
    changed = apply(prefixes_, kRuleExplanatoryWrapper, false) || changed;
    changed = apply(suffixes_, kRuleExplanatoryWrapper, false) || changed;
    if (config_.modal_filler_rule) changed = apply(fillers_, kRuleModalFiller, true) || changed;
    if (!changed) break;
  }
  return current;
}

FilterOutcome DialogueFilter::filter(const Dialogue& dialogue) const {
  FilterOutcome outcome;
  const auto structure = validate_dialogue(dialogue);
  if (!structure.ok()) {
    outcome.verdict = Verdict::Drop;
    outcome.reasons.emplace_back(kRuleStructure);
    outcome.findings.push_back(Finding{-1, std::string(kRuleStructure), structure.violations.front().message});
    return outcome;
  }
  bool dropped = false;
  bool repaired = false;
  Dialogue fixed = dialogue;
  for (auto& turn : fixed.turns) {
    if (auto f = drop_check(turn.text, dialogue.language, turn.index)) {
      outcome.findings.push_back(*f);
      dropped = true;
      continue;
    }
    std::vector<Finding> spans;
    std::string text = repair_text(turn.text, turn.index, &spans);
    if (text == turn.text) continue;
    outcome.findings.insert(outcome.findings.end(), spans.begin(), spans.end());
    if (auto f = drop_check(text, dialogue.language, turn.index)) {
      // emptied or newly offending after span removal
      outcome.findings.push_back(*f);
      dropped = true;
      continue;
    }
    turn.text = std::move(text);
    repaired = true;
  }
  std::vector<std::string> reasons;
  for (const auto& f : outcome.findings) add_reason(reasons, f.rule);
  std::stable_sort(reasons.begin(), reasons.end(),
                   [](const std::string& a, const std::string& b) { return rule_rank(a) < rule_rank(b); });
  outcome.reasons = std::move(reasons);
  if (dropped) {
    outcome.verdict = Verdict::Drop;
  } else if (repaired) {
    outcome.verdict = Verdict::Repair;
    outcome.repaired_dialogue = with_id(std::move(fixed));
  }
  return outcome;
}

FilterOutcome filter_dialogue(const Dialogue& dialogue, const FilterConfig& config) {
  return DialogueFilter(config).filter(dialogue);
}

}  // namespace forge::dataset
