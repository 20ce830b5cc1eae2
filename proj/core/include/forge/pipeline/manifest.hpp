#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace forge::pipeline {

using json = nlohmann::json;

struct StageCheckpoint {
  std::string name;
  std::size_t records = 0;
  /// Digest over everything the stage read: config, seed, external files and
  /// the outputs of earlier stages.
  std::string input_digest;
  /// Output file name (relative to the run directory) -> sha256 of its bytes.
  std::map<std::string, std::string> outputs;
  std::string completed_at;
};

struct RunManifest {
  std::string run_id;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::filesystem::path config_dir;
  std::vector<StageCheckpoint> stages;
  std::string started_at;
  std::optional<std::string> finished_at;
  /// Size of backend_log.jsonl after the last completed stage; a resumed run
  /// truncates the log back to this point before appending.
  std::uintmax_t backend_log_bytes = 0;

  const StageCheckpoint* find(const std::string& stage) const;
  /// Replaces the checkpoint of the same name, or appends a new one.
  void record(StageCheckpoint checkpoint);
};

json to_json(const RunManifest& m);
RunManifest manifest_from_json(const json& j);
RunManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const RunManifest& m);

/// sha256 of a file's bytes.
std::string file_digest(const std::filesystem::path& path);

/// True when every recorded output still exists with its recorded digest.
bool outputs_intact(const StageCheckpoint& checkpoint, const std::filesystem::path& run_dir);

/// UTC timestamp, second resolution, ISO 8601.
std::string utc_now();

}  // namespace forge::pipeline
