#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/dataset/filter.hpp"
#include "forge/dataset/prompts.hpp"
#include "forge/eval/score.hpp"
#include "forge/eval/templates.hpp"

namespace forge::pipeline {

using json = nlohmann::json;

/// Stage names in execution order.
inline const std::vector<std::string>& all_stages() {
  static const std::vector<std::string> kStages = {"characters", "dialogues",     "filter", "convert", "stats",
                                                   "evaluate",   "score",         "export_reward", "agree"};
  return kStages;
}

struct SourceSpec {
  std::string name;
  std::string series;
  Category category = Category::Fictional;
  Language language = Language::En;
  Split split = Split::Train;
  std::filesystem::path file;
};

struct HypotheticalSpec {
  std::size_t count = 0;
  std::string series = "Hypothetical Real-Life";
  Language language = Language::En;
  Split split = Split::Train;
};

struct GenerationSettings {
  std::string backend;
  std::size_t simplify_max_chars = 0;  // 0 disables simplification
  int simplify_attempts = 2;
  std::size_t summary_chunk_chars = 6000;
  int dialogues_per_pair = 1;
  std::vector<Scenario> scenarios = {Scenario::Commentary, Scenario::HumanRole, Scenario::InterRole};
  std::size_t images_per_character = 2;
  int turn_pairs = 3;
  double in_test_fraction = 0.2;
  dataset::GenerationPrompts prompts = dataset::GenerationPrompts::defaults();
};

enum class JudgeMode { Full, PerMetric };

struct JudgeSpec {
  std::string name;
  JudgeMode mode = JudgeMode::Full;
};

struct EvaluationSettings {
  std::vector<std::string> agents;
  std::vector<JudgeSpec> judges;
  std::string reference_judge;
  eval::ScoreScale scale;
  std::size_t commentary_chars = 400;
  /// 0 keeps every test sample.
  std::size_t max_test_samples = 0;
};

struct RewardSettings {
  std::string judge;
  std::size_t holdout_questions = 0;
  std::size_t models_per_question = 0;
};

struct AgreementSettings {
  std::string evaluator;
  std::string reference;
  std::optional<std::filesystem::path> human;
  double cap = 0.4;
};

/// Parsed, validated run configuration. All relative paths are resolved
/// against the directory holding the config file.
struct PipelineConfig {
  json raw;
  std::filesystem::path base_dir;
  /// sha256 of the canonical config text.
  std::string digest;
  std::uint64_t seed = 0;
  std::size_t workers = 4;
  std::vector<std::string> stages;
  std::optional<std::filesystem::path> characters_file;
  std::optional<std::filesystem::path> images_file;
  std::vector<SourceSpec> sources;
  HypotheticalSpec hypothetical;
  GenerationSettings generation;
  dataset::FilterConfig filter = dataset::FilterConfig::defaults();
  eval::AgentTemplates agent_templates = eval::AgentTemplates::original();
  eval::JudgeTemplate judge_template = eval::JudgeTemplate::standard();
  EvaluationSettings evaluation;
  RewardSettings reward;
  AgreementSettings agreement;

  bool has_stage(const std::string& name) const;
  /// Files outside the run directory that stages read.
  std::vector<std::filesystem::path> external_inputs() const;
  /// The subset `stage` reads.
  std::vector<std::filesystem::path> external_inputs(const std::string& stage) const;
};

/// ConfigError on unknown keys, bad values, credentials in backend blocks,
/// or references to backends that are not declared.
PipelineConfig parse_config(const json& raw, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace forge::pipeline
