#include "forge/agreement/gaps.hpp"

#include <algorithm>
#include <cstdio>

#include "forge/util/error.hpp"

namespace forge::agreement {

std::string_view to_string(Choice c) {
  switch (c) {
    case Choice::Better: return "Better";
    case Choice::Equal: return "Equal";
    case Choice::Worse: return "Worse";
  }
  return "?";
}

Choice parse_choice(std::string_view s) {
  for (auto c : {Choice::Better, Choice::Equal, Choice::Worse}) {
    if (to_string(c) == s) return c;
  }
  throw Error(Errc::SchemaError, "unknown choice '" + std::string(s) + "'");
}

Choice invert(Choice c) {
  if (c == Choice::Better) return Choice::Worse;
  if (c == Choice::Worse) return Choice::Better;
  return Choice::Equal;
}

double choice_gap(Choice c) {
  switch (c) {
    case Choice::Better: return 0.4;
    case Choice::Equal: return 0.0;
    case Choice::Worse: return -0.4;
  }
  return 0.0;
}

double human_gap(const std::vector<Choice>& choices) {
  if (choices.empty()) throw Error(Errc::EmptyInput, "human gap needs at least one judgment");
  // Sum in tenths so the mean is one division of exact integers.
  long tenths = 0;
  for (Choice c : choices) tenths += c == Choice::Better ? 4 : c == Choice::Worse ? -4 : 0;
  return static_cast<double>(tenths) / (10.0 * static_cast<double>(choices.size()));
}

double human_gap(const std::vector<HumanJudgment>& judgments) {
  std::vector<Choice> choices;
  choices.reserve(judgments.size());
  for (const auto& j : judgments) choices.push_back(j.choice);
  return human_gap(choices);
}

double model_gap(double score_a, double score_b, double cap) {
  if (!(cap > 0.0)) throw Error(Errc::InvalidArgument, "gap cap must be positive");
  return std::clamp(score_a - score_b, -cap, cap);
}

json to_json(const HumanComparison& c) {
  json judgments = json::array();
  for (const auto& j : c.judgments) {
    judgments.push_back(json{{"annotator_id", j.annotator_id}, {"choice", to_string(j.choice)}});
  }
  json out{{"question_id", c.question_id},
           {"metric", eval::to_string(c.metric)},
           {"agent_a", c.agent_a},
           {"agent_b", c.agent_b},
           {"judgments", std::move(judgments)}};
  out["gap"] = c.judgments.empty() ? json(nullptr) : json(c.gap());
  return out;
}

HumanComparison human_comparison_from_json(const json& j) {
  try {
    HumanComparison c;
    c.question_id = j.at("question_id").get<std::string>();
    c.metric = eval::parse_metric(j.at("metric").get<std::string>());
    c.agent_a = j.at("agent_a").get<std::string>();
    c.agent_b = j.at("agent_b").get<std::string>();
    for (const auto& row : j.at("judgments")) {
      c.judgments.push_back(HumanJudgment{c.question_id, c.metric, row.at("annotator_id").get<std::string>(),
                                          parse_choice(row.at("choice").get<std::string>())});
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaError, std::string("HumanComparison: ") + e.what());
  }
}

std::string SuccessRate::percent() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * fraction());
  return buf;
}

SuccessRate scoring_success_rate(const std::vector<eval::EvaluationTrajectory>& trajectories) {
  if (trajectories.empty()) throw Error(Errc::EmptyInput, "no trajectories to rate");
  SuccessRate r;
  r.total = trajectories.size();
  for (const auto& t : trajectories) r.ok += t.ok() ? 1 : 0;
  return r;
}

}  // namespace forge::agreement
