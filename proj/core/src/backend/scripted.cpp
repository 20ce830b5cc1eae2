#include "forge/backend/scripted.hpp"

#include "forge/domain/codec.hpp"
#include "forge/util/error.hpp"
#include "forge/util/jsonl.hpp"

namespace forge::backend {

ScriptedBackend::ScriptedBackend(std::map<std::string, ScriptEntry> script) : script_(std::move(script)) {}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::filesystem::path& path) {
  std::map<std::string, ScriptEntry> script;
  for (const auto& row : read_jsonl(path)) {
    FieldReader r(row, "ScriptEntry", Strictness::Strict);
    const std::string digest = r.string("digest");
    ScriptEntry entry;
    entry.response = r.string("response");
    if (const auto* n = r.optional("fail_first")) entry.fail_first = n->get<int>();
    if (const auto o = r.optional_string("fail_outcome")) entry.fail_outcome = parse_outcome(*o);
    r.optional("request_tag");
    r.finish();
    script[digest] = std::move(entry);
  }
  return std::make_shared<ScriptedBackend>(std::move(script));
}

void ScriptedBackend::set(const std::string& digest, ScriptEntry entry) {
  std::lock_guard lock(mutex_);
  script_[digest] = std::move(entry);
}

std::size_t ScriptedBackend::size() const {
  std::lock_guard lock(mutex_);
  return script_.size();
}

AttemptResult ScriptedBackend::send(const ChatRequest& request, const std::string& digest) {
  std::lock_guard lock(mutex_);
  const auto it = script_.find(digest);
  if (it == script_.end()) {
    throw Error(Errc::MissingScriptEntry, "no scripted response for digest " + digest + " (tag '" +
                                              request.request_tag + "')");
  }
  const int seen = attempts_[digest]++;
  AttemptResult result;
  if (seen < it->second.fail_first) {
    result.outcome = it->second.fail_outcome;
    result.error = "scripted " + std::string(to_string(it->second.fail_outcome));
    return result;
  }
  result.outcome = Outcome::Ok;
  result.text = it->second.response;
  return result;
}

std::shared_ptr<ScriptedBackend> scripted_backend(const std::map<std::string, std::string>& responses) {
  std::map<std::string, ScriptEntry> script;
  for (const auto& [digest, response] : responses) script[digest] = ScriptEntry{response};
  return std::make_shared<ScriptedBackend>(std::move(script));
}

}  // namespace forge::backend
