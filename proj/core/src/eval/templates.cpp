#include "forge/eval/templates.hpp"

#include "forge/domain/context.hpp"
#include "forge/util/error.hpp"
#include "forge/util/text.hpp"

namespace forge::eval {

namespace {

constexpr const char* kOriginalSystem =
    "You are a dedicated role-playing assistant designed to immerse yourself fully in the character you are "
    "portraying.";
constexpr const char* kModifiedSystem =
    "You are a highly skilled role-playing assistant, committed to fully immersing yourself in the character you "
    "embody.";

constexpr const char* kOriginalDesignation =
    "Please step into the shoes of {role_name} from {role_series}. Imagine you are talking with a curious human "
    "about the given image. This requires a deep understanding of the character's background, including their "
    "personality, experiences, abilities, and relationships.";
constexpr const char* kModifiedDesignation =
    "Imagine you are {role_name} from {role_series}, talking with a curious human about the given image. Draw on "
    "the character's background, including their personality, experiences, abilities, and relationships.";

constexpr const char* kCommentaryDesignation =
    "Please step into the shoes of {role_name} from {role_series}. You have just been shown the given image and "
    "want to comment on it in your own voice.";
constexpr const char* kModifiedCommentaryDesignation =
    "Imagine you are {role_name} from {role_series}, looking at the given image and commenting on it in your own "
    "voice.";

constexpr const char* kInterDesignation =
    "Please step into the shoes of {role_name} from {role_series}. You are talking with {other_role_name} about "
    "the given image.";
constexpr const char* kModifiedInterDesignation =
    "Imagine you are {role_name} from {role_series}, talking with {other_role_name} about the given image.";

std::string profile_block() { return "\n\n=== Profile of {role_name} ===\n{role_profile}"; }

std::string reply_rule() {
  return "\n\nWrite only the words {role_name} says next, in {language}. No stage directions, no narration.";
}

AgentTemplates build(const char* system, const char* commentary, const char* human, const char* inter) {
  AgentTemplates t;
  t.commentary = {system, std::string(commentary) + "\n\n{image}" + profile_block() + reply_rule()};
  t.human_role = {system, std::string(human) + "\n\n{image}" + profile_block() +
                              "\n\n=== Conversation so far ===\n{dialogue_history}" + reply_rule()};
  t.inter_role = {system, std::string(inter) + "\n\n{image}" + profile_block() + "{other_role_profile}" +
                              "\n\n=== Conversation so far ===\n{dialogue_history}" + reply_rule()};
  return t;
}

bool is_name_char(char c) { return (c >= 'a' && c <= 'z') || c == '_' || (c >= '0' && c <= '9'); }

/// Calls on_text/on_placeholder for each piece of `tmpl`.
template <typename Text, typename Hole>
void scan(const std::string& tmpl, Text on_text, Hole on_placeholder) {
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const auto open = tmpl.find('{', i);
    if (open == std::string::npos) {
      on_text(std::string_view(tmpl).substr(i));
      return;
    }
    std::size_t j = open + 1;
    while (j < tmpl.size() && is_name_char(tmpl[j])) ++j;
    if (j < tmpl.size() && tmpl[j] == '}' && j > open + 1) {
      on_text(std::string_view(tmpl).substr(i, open - i));
      on_placeholder(tmpl.substr(open + 1, j - open - 1));
      i = j + 1;
    } else {
      on_text(std::string_view(tmpl).substr(i, open + 1 - i));
      i = open + 1;
    }
  }
}

std::string speaker_label(const Speaker& s, const std::map<std::string, std::string>& names) {
  if (s.is_human()) return "Human";
  const auto it = names.find(s.character_id());
  return it == names.end() ? s.character_id() : it->second;
}

}  // namespace

std::set<std::string> placeholders(const std::string& tmpl) {
  std::set<std::string> out;
  scan(tmpl, [](std::string_view) {}, [&](std::string name) { out.insert(std::move(name)); });
  return out;
}

std::string render_template(const std::string& tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  scan(
      tmpl, [&](std::string_view t) { out.append(t); },
      [&](const std::string& name) {
        const auto it = values.find(name);
        if (it == values.end()) throw Error(Errc::InvalidArgument, "template uses unknown placeholder {" + name + "}");
        out += it->second;
      });
  return out;
}

void require_placeholders(const std::string& tmpl, const std::vector<std::string>& required,
                          const std::string& template_name) {
  const auto present = placeholders(tmpl);
  for (const auto& r : required) {
    if (!present.count(r)) {
      throw Error(Errc::MissingPlaceholder, "template '" + template_name + "' lacks {" + r + "}");
    }
  }
}

const AgentTemplate& AgentTemplates::for_scenario(Scenario s) const {
  switch (s) {
    case Scenario::Commentary: return commentary;
    case Scenario::HumanRole: return human_role;
    case Scenario::InterRole: return inter_role;
  }
  return human_role;
}

AgentTemplates AgentTemplates::original() {
  return build(kOriginalSystem, kCommentaryDesignation, kOriginalDesignation, kInterDesignation);
}

AgentTemplates AgentTemplates::modified() {
  return build(kModifiedSystem, kModifiedCommentaryDesignation, kModifiedDesignation, kModifiedInterDesignation);
}

AgentTemplates AgentTemplates::from_json(const json& j) {
  AgentTemplates t = j.value("variant", std::string("original")) == "modified" ? modified() : original();
  if (j.contains("system")) {
    const auto s = j.at("system").get<std::string>();
    t.commentary.system = t.human_role.system = t.inter_role.system = s;
  }
  if (j.contains("commentary")) t.commentary.body = j.at("commentary").get<std::string>();
  if (j.contains("human_role")) t.human_role.body = j.at("human_role").get<std::string>();
  if (j.contains("inter_role")) t.inter_role.body = j.at("inter_role").get<std::string>();
  return t;
}

JudgeTemplate JudgeTemplate::standard() {
  JudgeTemplate t;
  t.system = "You are a strict and fair judge of role-playing replies.";
  t.body =
      "Two replies were written for {role_name} from {role_series}. Response 1 comes from the agent being "
      "evaluated. Response 2 is the reference reply.\n\n"
      "{image}\n\n"
      "=== Profile of {role_name} ===\n{role_profile}{other_role_profile}\n\n"
      "=== Conversation so far ===\n{dialogue_history}\n\n"
      "=== Response 1 ===\n{agent_response}\n\n"
      "=== Response 2 (reference) ===\n{ground_truth}\n\n"
      "Compare the two responses on these metrics:\n{metrics}\n\n"
      "For each metric write one line exactly like this:\n"
      "<abbreviation>: <brief comparison, at most {commentary_chars} characters> Scores: <score for Response 1> "
      "<score for Response 2>\n"
      "Scores are integers from {scale_min} to {scale_max}. Keep the order above and write nothing else.";
  return t;
}

JudgeTemplate JudgeTemplate::from_json(const json& j) {
  JudgeTemplate t = standard();
  if (j.contains("system")) t.system = j.at("system").get<std::string>();
  if (j.contains("body")) t.body = j.at("body").get<std::string>();
  return t;
}

std::string RenderedPrompt::text() const { return system.empty() ? user : system + "\n\n" + user; }

SampleContext resolve_context(const std::string& dialogue_id, int target_turn_index, const Corpus& corpus) {
  const Dialogue& d = corpus.require_dialogue(dialogue_id);
  const ContextView view = context_view(d, target_turn_index);
  SampleContext ctx;
  ctx.scenario = d.scenario;
  ctx.role = &corpus.require_character(view.role_id);
  if (view.other_role_id) ctx.other = &corpus.require_character(*view.other_role_id);
  ctx.image = &corpus.require_image(d.image);
  ctx.history = view.prior_turns;
  ctx.names[ctx.role->id] = ctx.role->name;
  if (ctx.other) ctx.names[ctx.other->id] = ctx.other->name;
  return ctx;
}

std::string render_history(const std::vector<Turn>& turns, const std::map<std::string, std::string>& names) {
  if (turns.empty()) return "(no previous turns)";
  std::vector<std::string> lines;
  lines.reserve(turns.size());
  for (const auto& t : turns) lines.push_back(speaker_label(t.speaker, names) + ": " + t.text);
  return text::join(lines, "\n");
}

namespace {

std::map<std::string, std::string> common_values(const SampleContext& ctx) {
  if (!ctx.role || !ctx.image) throw Error(Errc::InvalidArgument, "sample context is missing role or image");
  std::map<std::string, std::string> v;
  v["role_name"] = ctx.role->name;
  v["role_series"] = ctx.role->series;
  v["role_profile"] = prompt_profile_text(ctx.role->profile);
  v["image"] = "<image>";
  v["language"] = std::string(language_name(ctx.role->language));
  v["dialogue_history"] = render_history(ctx.history, ctx.names);
  v["other_role_name"] = ctx.other ? ctx.other->name : "";
  v["other_role_profile"] =
      ctx.other ? "\n\n=== Profile of " + ctx.other->name + " ===\n" + prompt_profile_text(ctx.other->profile) : "";
  return v;
}

}  // namespace

RenderedPrompt build_agent_prompt(const SampleContext& ctx, const AgentTemplates& templates) {
  const AgentTemplate& t = templates.for_scenario(ctx.scenario);
  std::vector<std::string> required = {"role_name", "role_series", "role_profile", "image"};
  if (ctx.scenario != Scenario::Commentary) required.push_back("dialogue_history");
  if (ctx.scenario == Scenario::InterRole) required.push_back("other_role_profile");
  require_placeholders(t.body, required, std::string(to_string(ctx.scenario)) + " agent template");
  const auto values = common_values(ctx);
  return RenderedPrompt{render_template(t.system, values), render_template(t.body, values), ctx.image->uri};
}

RenderedPrompt build_agent_prompt(const TrainingSample& sample, const Corpus& corpus, const AgentTemplates& templates) {
  return build_agent_prompt(resolve_context(sample.dialogue_id, sample.target_turn_index, corpus), templates);
}

RenderedPrompt build_judge_prompt(const SampleContext& ctx, const std::string& agent_response,
                                  const std::string& ground_truth, const JudgeTemplate& tmpl,
                                  const std::vector<Metric>& metrics, const JudgeOptions& options) {
  if (metrics.empty()) throw Error(Errc::InvalidArgument, "judge prompt needs at least one metric");
  std::vector<std::string> required = {"role_name", "role_profile", "dialogue_history", "agent_response",
                                       "ground_truth", "metrics"};
  if (ctx.scenario == Scenario::InterRole) required.push_back("other_role_profile");
  require_placeholders(tmpl.body, required, "judge template");
  auto values = common_values(ctx);
  values["agent_response"] = agent_response.empty() ? "(empty response)" : agent_response;
  values["ground_truth"] = ground_truth;
  std::vector<std::string> lines;
  for (Metric m : metrics) {
    lines.push_back("- " + std::string(to_string(m)) + " (" + std::string(full_name(m)) +
                    "): " + std::string(definition(m)));
  }
  values["metrics"] = text::join(lines, "\n");
  values["commentary_chars"] = std::to_string(options.commentary_chars);
  values["scale_min"] = std::to_string(options.scale.min);
  values["scale_max"] = std::to_string(options.scale.max);
  return RenderedPrompt{render_template(tmpl.system, values), render_template(tmpl.body, values), ctx.image->uri};
}

RenderedPrompt build_judge_prompt(const TestSample& sample, const std::string& agent_response,
                                  const std::string& ground_truth, const Corpus& corpus, const JudgeTemplate& tmpl,
                                  const std::vector<Metric>& metrics, const JudgeOptions& options) {
  return build_judge_prompt(resolve_context(sample.dialogue_id, sample.target_turn_index, corpus), agent_response,
                            ground_truth, tmpl, metrics, options);
}

}  // namespace forge::eval
