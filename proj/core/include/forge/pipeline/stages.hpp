#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "forge/backend/client.hpp"
#include "forge/backend/registry.hpp"
#include "forge/pipeline/config.hpp"

namespace forge::pipeline {

// Stage output files, relative to the working directory.
inline constexpr const char* kRawDialoguesFile = "dialogues.raw.jsonl";
inline constexpr const char* kGenerationReportFile = "generation_report.jsonl";
inline constexpr const char* kFilterReportFile = "filter_report.jsonl";
inline constexpr const char* kStatsFile = "stats.json";
inline constexpr const char* kTrajectoriesFile = "trajectories.jsonl";
inline constexpr const char* kMetricSamplesFile = "metric_samples.jsonl";
inline constexpr const char* kScoresFile = "scores.jsonl";
inline constexpr const char* kRewardTrainFile = "reward_train.jsonl";
inline constexpr const char* kRewardValFile = "reward_val.jsonl";
inline constexpr const char* kAgreementFile = "agreement_report.json";
inline constexpr const char* kBackendLogFile = "backend_log.jsonl";

/// Shared state for one stage invocation. Backends are built on first use so
/// a stage never needs credentials or scripts it does not call.
class StageContext {
 public:
  StageContext(const PipelineConfig& config, std::filesystem::path dir,
               std::shared_ptr<const backend::BackendRegistry> registry = nullptr);

  const PipelineConfig& config() const { return config_; }
  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path(const std::string& file) const { return dir_ / file; }

  backend::BackendHandle& backend(const std::string& name);

  /// Backend records in deterministic (plan) order; the runner appends them
  /// to the audit log once the stage succeeds.
  std::vector<backend::BackendRecord> log;

 private:
  const PipelineConfig& config_;
  std::filesystem::path dir_;
  std::shared_ptr<const backend::BackendRegistry> registry_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<backend::BackendHandle>> backends_;
};

struct StageResult {
  std::size_t records = 0;
  /// Files written, relative to the working directory.
  std::vector<std::string> outputs;
  /// Generated dialogues rejected for breaking their scenario's shape.
  std::size_t structure_errors = 0;
};

using StageFn = std::function<StageResult(StageContext&)>;

StageResult run_characters_stage(StageContext& ctx);
StageResult run_dialogues_stage(StageContext& ctx);
StageResult run_filter_stage(StageContext& ctx);
StageResult run_convert_stage(StageContext& ctx);
StageResult run_stats_stage(StageContext& ctx);
StageResult run_evaluate_stage(StageContext& ctx);
StageResult run_score_stage(StageContext& ctx);
StageResult run_export_reward_stage(StageContext& ctx);
StageResult run_agree_stage(StageContext& ctx);

/// Stage function by name; ConfigError for an unknown name.
const StageFn& stage_function(const std::string& name);

/// Stage errors carry the stage name and, when known, the failing record.
[[noreturn]] void stage_error(const std::string& stage, const std::string& record, const std::string& what);

}  // namespace forge::pipeline
