#include "forge/pipeline/run.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>

#include <spdlog/spdlog.h>

#include "forge/pipeline/stages.hpp"
#include "forge/util/error.hpp"
#include "forge/util/hash.hpp"
#include "forge/util/jsonl.hpp"

namespace forge::pipeline {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kConfigSnapshot = "config.json";

std::size_t stage_rank(const std::string& name) {
  const auto& all = all_stages();
  return static_cast<std::size_t>(std::find(all.begin(), all.end(), name) - all.begin());
}

/// Cuts the audit log back to the size recorded with the last checkpoint,
/// dropping records from a stage that never completed.
void rewind_log(const fs::path& log, std::uintmax_t bytes) {
  std::error_code ec;
  if (!fs::exists(log, ec)) return;
  if (fs::file_size(log) != bytes) fs::resize_file(log, bytes);
}

}  // namespace

std::string run_id_for(const PipelineConfig& config) {
  return "run-" + sha256_hex(config.digest + ":" + std::to_string(config.seed)).substr(0, 12);
}

RunLock::RunLock(const fs::path& dir) : path_(dir / ".lock") {
  fd_ = ::open(path_.c_str(), O_RDWR | O_CREAT, 0644);
  if (fd_ < 0) throw Error(Errc::IoError, "cannot open " + path_.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw Error(Errc::Locked, dir.string() + " is in use by another run");
  }
}

RunLock::~RunLock() {
  if (fd_ < 0) return;
  std::error_code ec;
  fs::remove(path_, ec);
  ::flock(fd_, LOCK_UN);
  ::close(fd_);
}

std::string stage_input_digest(const PipelineConfig& config, const RunManifest& manifest, const std::string& stage) {
  json external = json::object();
  for (const auto& path : config.external_inputs(stage)) {
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) continue;
    external[path.lexically_relative(config.base_dir).generic_string()] = file_digest(path);
  }
  json prior = json::array();
  for (const auto& cp : manifest.stages) {
    if (stage_rank(cp.name) < stage_rank(stage)) prior.push_back({{"stage", cp.name}, {"outputs", cp.outputs}});
  }
  const json basis = {{"config", config.digest},
                      {"seed", config.seed},
                      {"stage", stage},
                      {"external", external},
                      {"prior", prior}};
  return sha256_hex(canonical_dump(basis));
}

RunOutcome run_pipeline(const PipelineConfig& config, const RunOptions& options) {
  RunOutcome out;
  const auto id = run_id_for(config);
  out.run_dir = options.runs_dir / id;
  fs::create_directories(out.run_dir);
  RunLock lock(out.run_dir);

  const auto manifest_path = out.run_dir / kManifestFile;
  RunManifest& m = out.manifest;
  if (fs::exists(manifest_path)) {
    m = load_manifest(manifest_path);
    if (m.config_digest != config.digest || m.seed != config.seed) {
      throw Error(Errc::ConfigError, out.run_dir.string() + " belongs to a different config or seed");
    }
  } else {
    m.run_id = id;
    m.config_digest = config.digest;
    m.seed = config.seed;
    m.config_dir = config.base_dir;
    m.started_at = utc_now();
    write_json(out.run_dir / kConfigSnapshot, config.raw);
    save_manifest(manifest_path, m);
  }

  const auto log_path = out.run_dir / kBackendLogFile;
  rewind_log(log_path, m.backend_log_bytes);

  for (const auto& stage : config.stages) {
    const auto digest = stage_input_digest(config, m, stage);
    const auto* cp = m.find(stage);
    if (cp && cp->input_digest == digest && outputs_intact(*cp, out.run_dir)) {
      spdlog::info("{}: up to date, skipped", stage);
      out.skipped.push_back(stage);
      continue;
    }
    spdlog::info("{}: running", stage);
    StageContext ctx(config, out.run_dir, options.registry);
    StageResult result;
    try {
      result = stage_function(stage)(ctx);
    } catch (const Error& e) {
      if (e.code() == Errc::StageError || e.code() == Errc::ConfigError) throw;
      stage_error(stage, "", e.what());
    }
    {
      backend::BackendLog log(log_path);
      log.append(ctx.log);
    }
    StageCheckpoint next;
    next.name = stage;
    next.records = result.records;
    next.input_digest = digest;
    for (const auto& file : result.outputs) next.outputs[file] = file_digest(out.run_dir / file);
    next.completed_at = utc_now();
    m.record(std::move(next));
    m.backend_log_bytes = fs::exists(log_path) ? fs::file_size(log_path) : 0;
    m.finished_at.reset();
    save_manifest(manifest_path, m);
    out.executed.push_back(stage);
    out.structure_errors += result.structure_errors;
    spdlog::info("{}: {} record(s)", stage, result.records);

    if (options.stop_after && *options.stop_after == stage) {
      spdlog::info("stopping after {}", stage);
      return out;
    }
  }
  if (!out.executed.empty() || !m.finished_at) {
    m.finished_at = utc_now();
    save_manifest(manifest_path, m);
  }
  out.completed = true;
  return out;
}

RunOutcome run(const fs::path& config_path, std::optional<std::uint64_t> seed, const RunOptions& options) {
  auto config = load_config(config_path);
  if (seed && *seed != config.seed) {
    auto raw = config.raw;
    raw["seed"] = *seed;
    config = parse_config(raw, config.base_dir);
  }
  return run_pipeline(config, options);
}

RunOutcome resume(const std::string& run_id, const RunOptions& options) {
  const auto dir = options.runs_dir / run_id;
  if (!fs::exists(dir / kManifestFile) || !fs::exists(dir / kConfigSnapshot)) {
    throw Error(Errc::ConfigError, "no resumable run at " + dir.string());
  }
  const auto manifest = load_manifest(dir / kManifestFile);
  const auto config = parse_config(read_json(dir / kConfigSnapshot), manifest.config_dir);
  if (config.digest != manifest.config_digest) {
    throw Error(Errc::ConfigError, "config snapshot of " + run_id + " does not match its manifest");
  }
  return run_pipeline(config, options);
}

}  // namespace forge::pipeline
