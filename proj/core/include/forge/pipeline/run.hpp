#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forge/backend/registry.hpp"
#include "forge/pipeline/config.hpp"
#include "forge/pipeline/manifest.hpp"

namespace forge::pipeline {

struct RunOptions {
  std::filesystem::path runs_dir = "runs";
  /// Stop (as if interrupted) once this stage has completed.
  std::optional<std::string> stop_after;
  /// Custom backend kinds; the built-in registry when null.
  std::shared_ptr<const backend::BackendRegistry> registry;
};

struct RunOutcome {
  RunManifest manifest;
  std::filesystem::path run_dir;
  std::vector<std::string> executed;
  std::vector<std::string> skipped;
  std::size_t structure_errors = 0;
  /// False when the run stopped early.
  bool completed = false;
};

/// "run-" followed by 12 hex characters of sha256(config digest, seed).
std::string run_id_for(const PipelineConfig& config);

/// Exclusive advisory lock on `<dir>/.lock`; Locked when another process
/// holds it.
class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& dir);
  ~RunLock();
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

/// Executes the configured stages under runs_dir/<run id>. A stage whose
/// input digest matches its checkpoint and whose outputs are intact is
/// skipped, so rerunning a finished run changes nothing.
RunOutcome run_pipeline(const PipelineConfig& config, const RunOptions& options = {});

/// Loads `config_path`, optionally overriding its seed, and runs it.
RunOutcome run(const std::filesystem::path& config_path, std::optional<std::uint64_t> seed,
               const RunOptions& options = {});

/// Continues a run from its stored config snapshot and manifest.
RunOutcome resume(const std::string& run_id, const RunOptions& options = {});

/// Digest a stage's checkpoint is compared against.
std::string stage_input_digest(const PipelineConfig& config, const RunManifest& manifest, const std::string& stage);

}  // namespace forge::pipeline
