#include "forge/eval/reward_export.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "forge/util/error.hpp"
#include "forge/util/rng.hpp"

namespace forge::eval {

json to_json(const RewardRecord& r) {
  return json{{"prompt", r.prompt},
              {"target", r.target},
              {"metric", to_string(r.metric)},
              {"sample_id", r.sample_id},
              {"agent_id", r.agent_id}};
}

RewardRecord reward_record_from_json(const json& j) {
  try {
    return RewardRecord{j.at("prompt").get<std::string>(), j.at("target").get<std::string>(),
                        parse_metric(j.at("metric").get<std::string>()), j.at("sample_id").get<std::string>(),
                        j.at("agent_id").get<std::string>()};
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaError, std::string("RewardRecord: ") + e.what());
  }
}

RewardSplit export_reward_training(const std::vector<EvaluationTrajectory>& trajectories, const HoldoutSpec& spec,
                                   const RewardPromptBuilder& prompt_builder) {
  if (!prompt_builder) throw Error(Errc::InvalidArgument, "reward export needs a prompt builder");
  std::set<std::string> judges;
  std::map<std::pair<std::string, std::string>, const EvaluationTrajectory*> by_key;
  std::map<std::string, std::vector<std::string>> agents_by_question;
  for (const auto& t : trajectories) {
    if (!t.ok()) continue;
    judges.insert(t.judge_id);
    if (!by_key.emplace(std::make_pair(t.sample_id, t.agent_id), &t).second) {
      throw Error(Errc::InvalidArgument, "duplicate trajectory for question " + t.sample_id + ", agent " + t.agent_id);
    }
    agents_by_question[t.sample_id].push_back(t.agent_id);
  }
  if (judges.size() > 1) throw Error(Errc::InvalidArgument, "reward export expects trajectories from a single judge");

  std::vector<std::string> held_questions;
  if (spec.questions > 0) {
    if (!spec.question_ids.empty()) {
      if (spec.question_ids.size() != spec.questions) {
        throw Error(Errc::InvalidArgument, "holdout names " + std::to_string(spec.question_ids.size()) +
                                               " questions but asks for " + std::to_string(spec.questions));
      }
      held_questions = spec.question_ids;
    } else {
      std::vector<std::string> all;
      for (const auto& [q, agents] : agents_by_question) all.push_back(q);
      if (all.size() < spec.questions) {
        throw Error(Errc::InsufficientData, "holdout asks for " + std::to_string(spec.questions) +
                                                " questions but only " + std::to_string(all.size()) + " are scored");
      }
      KeyedRng rng(spec.seed, "reward-holdout/questions");
      rng.shuffle(all);
      held_questions.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(spec.questions));
    }
  }

  RewardSplit split;
  std::set<std::pair<std::string, std::string>> held;
  for (const auto& q : held_questions) {
    auto agents = agents_by_question[q];
    if (agents.size() < spec.models_per_question) {
      throw Error(Errc::InsufficientData, "question " + q + " has " + std::to_string(agents.size()) +
                                              " scored agents, holdout needs " +
                                              std::to_string(spec.models_per_question));
    }
    std::sort(agents.begin(), agents.end());
    KeyedRng rng(spec.seed, "reward-holdout/agents/" + q);
    rng.shuffle(agents);
    for (std::size_t i = 0; i < spec.models_per_question; ++i) held.insert({q, agents[i]});
  }
  split.holdout.assign(held.begin(), held.end());

  for (const auto& [key, t] : by_key) {
    auto& dest = held.count(key) ? split.validation : split.train;
    for (const auto& a : t->assessments) {
      dest.push_back(RewardRecord{prompt_builder(*t, a.metric), format_assessment(a), a.metric, t->sample_id,
                                  t->agent_id});
    }
  }
  return split;
}

}  // namespace forge::eval
