#pragma once

#include <climits>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "forge/backend/chat.hpp"

namespace forge::backend {

struct ScriptEntry {
  std::string response;
  /// The first `fail_first` attempts for this digest return `fail_outcome`.
  int fail_first = 0;
  Outcome fail_outcome = Outcome::TransportError;

  static ScriptEntry always_failing(Outcome outcome) { return {"", INT_MAX, outcome}; }
};

/// Deterministic backend answering from a digest-keyed table. A digest with
/// no entry raises MissingScriptEntry.
class ScriptedBackend final : public ChatBackend {
 public:
  ScriptedBackend() = default;
  explicit ScriptedBackend(std::map<std::string, ScriptEntry> script);

  /// JSONL rows {"digest", "response", optional "fail_first", "fail_outcome", "request_tag"}.
  static std::shared_ptr<ScriptedBackend> from_file(const std::filesystem::path& path);

  void set(const std::string& digest, ScriptEntry entry);
  std::size_t size() const;

  AttemptResult send(const ChatRequest& request, const std::string& digest) override;
  std::string kind() const override { return "scripted"; }

 private:
  mutable std::mutex mutex_;
  std::map<std::string, ScriptEntry> script_;
  std::map<std::string, int> attempts_;
};

std::shared_ptr<ScriptedBackend> scripted_backend(const std::map<std::string, std::string>& responses);

/// Pass-through wrapper that remembers every Ok response by digest, so a live
/// or simulated run can be frozen into a script file.
class RecordingBackend final : public ChatBackend {
 public:
  explicit RecordingBackend(std::shared_ptr<ChatBackend> inner);

  AttemptResult send(const ChatRequest& request, const std::string& digest) override;
  std::string kind() const override { return "recording:" + inner_->kind(); }

  /// Rows sorted by digest.
  void write_script(const std::filesystem::path& path) const;
  std::size_t size() const;

 private:
  std::shared_ptr<ChatBackend> inner_;
  mutable std::mutex mutex_;
  std::map<std::string, std::pair<std::string, std::string>> recorded_;
};

}  // namespace forge::backend
