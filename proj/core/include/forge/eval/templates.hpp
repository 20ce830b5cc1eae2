#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/domain/corpus.hpp"
#include "forge/domain/types.hpp"
#include "forge/eval/metric.hpp"
#include "forge/eval/score.hpp"

namespace forge::eval {

using json = nlohmann::json;

/// Names of the `{placeholder}` tokens in `tmpl`.
std::set<std::string> placeholders(const std::string& tmpl);

/// Single-pass substitution, so braces inside values are never expanded.
/// Throws InvalidArgument for a placeholder with no value.
std::string render_template(const std::string& tmpl, const std::map<std::string, std::string>& values);

/// Throws MissingPlaceholder naming the first absent entry of `required`.
void require_placeholders(const std::string& tmpl, const std::vector<std::string>& required,
                          const std::string& template_name);

struct AgentTemplate {
  std::string system;
  std::string body;
};

/// One body per scenario. Every body needs {role_name}, {role_series},
/// {role_profile} and {image}; multi-turn bodies also {dialogue_history};
/// the inter-role body also {other_role_profile}.
struct AgentTemplates {
  AgentTemplate commentary;
  AgentTemplate human_role;
  AgentTemplate inter_role;

  const AgentTemplate& for_scenario(Scenario s) const;

  /// The stock wording.
  static AgentTemplates original();
  /// Reworded system line and character designation.
  static AgentTemplates modified();
  /// Starts from original() and replaces any field present in `j`
  /// ({"system": ..., "commentary": ..., "human_role": ..., "inter_role": ...}).
  static AgentTemplates from_json(const json& j);
};

struct JudgeTemplate {
  std::string system;
  std::string body;

  static JudgeTemplate standard();
  static JudgeTemplate from_json(const json& j);
};

struct RenderedPrompt {
  std::string system;
  std::string user;
  std::optional<std::string> image_uri;

  /// System and user parts joined by a blank line; stored in samples.
  std::string text() const;
};

/// Everything a prompt needs about one sample, resolved from the corpus.
struct SampleContext {
  Scenario scenario = Scenario::Commentary;
  const Character* role = nullptr;
  const Character* other = nullptr;
  const ImageRecord* image = nullptr;
  std::vector<Turn> history;
  /// Speaker labels for history lines.
  std::map<std::string, std::string> names;
};

SampleContext resolve_context(const std::string& dialogue_id, int target_turn_index, const Corpus& corpus);

/// "Human: ..." / "<Name>: ..." lines, or a placeholder line when empty.
std::string render_history(const std::vector<Turn>& turns, const std::map<std::string, std::string>& names);

RenderedPrompt build_agent_prompt(const SampleContext& ctx, const AgentTemplates& templates);
RenderedPrompt build_agent_prompt(const TrainingSample& sample, const Corpus& corpus, const AgentTemplates& templates);

struct JudgeOptions {
  ScoreScale scale;
  std::size_t commentary_chars = 400;
};

/// Needs {role_name}, {role_profile}, {dialogue_history}, {agent_response},
/// {ground_truth} and {metrics}. Passing a single metric yields the
/// per-metric prompt used for reward-model data.
RenderedPrompt build_judge_prompt(const SampleContext& ctx, const std::string& agent_response,
                                  const std::string& ground_truth, const JudgeTemplate& tmpl,
                                  const std::vector<Metric>& metrics, const JudgeOptions& options = {});
RenderedPrompt build_judge_prompt(const TestSample& sample, const std::string& agent_response,
                                  const std::string& ground_truth, const Corpus& corpus, const JudgeTemplate& tmpl,
                                  const std::vector<Metric>& metrics, const JudgeOptions& options = {});

}  // namespace forge::eval
