#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/eval/metric.hpp"
#include "forge/eval/trajectory.hpp"

namespace forge::agreement {

using json = nlohmann::json;

/// Response A compared with response B.
enum class Choice { Better, Equal, Worse };

std::string_view to_string(Choice c);
Choice parse_choice(std::string_view s);
Choice invert(Choice c);

struct HumanJudgment {
  std::string question_id;
  eval::Metric metric = eval::Metric::IA;
  std::string annotator_id;
  Choice choice = Choice::Equal;

  bool operator==(const HumanJudgment&) const = default;
};

/// Better -> +0.4, Equal -> 0, Worse -> -0.4.
double choice_gap(Choice c);

/// Mean of the mapped choices; EmptyInput for an empty list.
double human_gap(const std::vector<Choice>& choices);
double human_gap(const std::vector<HumanJudgment>& judgments);

/// clamp(a - b, -cap, cap); InvalidArgument unless cap > 0.
double model_gap(double score_a, double score_b, double cap = 0.4);

/// Human verdicts on one (question, metric) comparing agent_a with agent_b.
struct HumanComparison {
  std::string question_id;
  eval::Metric metric = eval::Metric::IA;
  std::string agent_a;
  std::string agent_b;
  std::vector<HumanJudgment> judgments;

  double gap() const { return human_gap(judgments); }
};

/// {"question_id", "metric", "agent_a", "agent_b", "judgments": [{"annotator_id", "choice"}], "gap"}
json to_json(const HumanComparison& c);
HumanComparison human_comparison_from_json(const json& j);

struct SuccessRate {
  std::size_t ok = 0;
  std::size_t total = 0;

  double fraction() const { return static_cast<double>(ok) / static_cast<double>(total); }
  /// Two decimals with a percent sign, e.g. "33.33%".
  std::string percent() const;
};

/// EmptyInput for no trajectories.
SuccessRate scoring_success_rate(const std::vector<eval::EvaluationTrajectory>& trajectories);

}  // namespace forge::agreement
