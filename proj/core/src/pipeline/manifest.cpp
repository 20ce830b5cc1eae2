#include "forge/pipeline/manifest.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

#include "forge/util/error.hpp"
#include "forge/util/hash.hpp"
#include "forge/util/jsonl.hpp"

namespace forge::pipeline {

const StageCheckpoint* RunManifest::find(const std::string& stage) const {
  const auto it = std::find_if(stages.begin(), stages.end(), [&](const StageCheckpoint& c) { return c.name == stage; });
  return it == stages.end() ? nullptr : &*it;
}

void RunManifest::record(StageCheckpoint checkpoint) {
  const auto it =
      std::find_if(stages.begin(), stages.end(), [&](const StageCheckpoint& c) { return c.name == checkpoint.name; });
  if (it != stages.end()) {
    *it = std::move(checkpoint);
  } else {
    stages.push_back(std::move(checkpoint));
  }
}

json to_json(const RunManifest& m) {
  json stages = json::array();
  for (const auto& s : m.stages) {
    stages.push_back({{"name", s.name},
                      {"records", s.records},
                      {"input_digest", s.input_digest},
                      {"outputs", s.outputs},
                      {"completed_at", s.completed_at}});
  }
  json j = {{"run_id", m.run_id},
            {"config_digest", m.config_digest},
            {"seed", m.seed},
            {"config_dir", m.config_dir.string()},
            {"stages", stages},
            {"started_at", m.started_at},
            {"backend_log_bytes", m.backend_log_bytes}};
  j["finished_at"] = m.finished_at ? json(*m.finished_at) : json(nullptr);
  return j;
}

RunManifest manifest_from_json(const json& j) {
  try {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.config_digest = j.at("config_digest").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_dir = j.at("config_dir").get<std::string>();
    m.started_at = j.at("started_at").get<std::string>();
    m.backend_log_bytes = j.value("backend_log_bytes", std::uintmax_t{0});
    if (j.contains("finished_at") && !j.at("finished_at").is_null()) m.finished_at = j.at("finished_at").get<std::string>();
    for (const auto& s : j.at("stages")) {
      m.stages.push_back({s.at("name").get<std::string>(), s.at("records").get<std::size_t>(),
                          s.at("input_digest").get<std::string>(),
                          s.at("outputs").get<std::map<std::string, std::string>>(),
                          s.value("completed_at", std::string())});
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaError, std::string("bad manifest: ") + e.what());
  }
}

RunManifest load_manifest(const std::filesystem::path& path) { return manifest_from_json(read_json(path)); }

void save_manifest(const std::filesystem::path& path, const RunManifest& m) { write_json(path, to_json(m)); }

std::string file_digest(const std::filesystem::path& path) { return sha256_hex(read_text(path)); }

bool outputs_intact(const StageCheckpoint& checkpoint, const std::filesystem::path& run_dir) {
  for (const auto& [name, digest] : checkpoint.outputs) {
    const auto path = run_dir / name;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) return false;
    if (file_digest(path) != digest) return false;
  }
  return true;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace forge::pipeline
