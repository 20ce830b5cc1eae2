#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/eval/trajectory.hpp"

namespace forge::eval {

using json = nlohmann::json;

/// One single-metric judging example for reward-model training.
struct RewardRecord {
  std::string prompt;
  std::string target;
  Metric metric = Metric::IA;
  std::string sample_id;
  std::string agent_id;

  bool operator==(const RewardRecord&) const = default;
};

json to_json(const RewardRecord& r);
RewardRecord reward_record_from_json(const json& j);

struct HoldoutSpec {
  /// Number of held-out questions (test samples).
  std::size_t questions = 0;
  /// Agents per held-out question.
  std::size_t models_per_question = 0;
  /// When non-empty these questions are held out instead of a seeded draw;
  /// its size must equal `questions`.
  std::vector<std::string> question_ids;
  std::uint64_t seed = 0;
};

/// Builds the per-metric judge prompt for one trajectory.
using RewardPromptBuilder = std::function<std::string(const EvaluationTrajectory&, Metric)>;

struct RewardSplit {
  std::vector<RewardRecord> train;
  std::vector<RewardRecord> validation;
  /// Held-out (question, agent) pairs, sorted.
  std::vector<std::pair<std::string, std::string>> holdout;
};

/// Ok trajectories from a single judge are segmented into eight records
/// each; Q questions x M agents go to validation, the rest to train.
/// Throws InsufficientData when too few questions exist or a held-out
/// question has fewer than M scored agents (the message names it).
RewardSplit export_reward_training(const std::vector<EvaluationTrajectory>& trajectories, const HoldoutSpec& spec,
                                   const RewardPromptBuilder& prompt_builder);

}  // namespace forge::eval
