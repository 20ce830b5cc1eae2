#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "forge/backend/client.hpp"

namespace forge::backend {

struct FactoryContext {
  std::string name;
  /// Directory that relative paths in the backend block resolve against.
  std::filesystem::path base_dir;
};

using BackendFactory = std::function<std::shared_ptr<ChatBackend>(const json& block, const FactoryContext& ctx)>;

/// Named backends built from a `backends` config object:
///
///   {"judge": {"kind": "scripted", "script": "scripts/judge.jsonl"},
///    "gpt":   {"kind": "http", "endpoint": "...", "model": "...", "api_key_env": "OPENAI_API_KEY",
///              "max_in_flight": 4, "requests_per_minute": 60, "max_attempts": 3}}
///
/// Secrets are never read from config: blocks carrying credential-like keys
/// are rejected with ConfigError.
class BackendRegistry {
 public:
  BackendRegistry();

  /// Adds or replaces a kind. "scripted" and "http" are built in.
  void register_kind(const std::string& kind, BackendFactory factory);
  bool has_kind(const std::string& kind) const;

  std::map<std::string, std::shared_ptr<BackendHandle>> build(const json& backends,
                                                              const std::filesystem::path& base_dir,
                                                              const RetryPolicy& base_retry = {}) const;

  std::shared_ptr<BackendHandle> build_one(const std::string& name, const json& block,
                                           const std::filesystem::path& base_dir,
                                           const RetryPolicy& base_retry = {}) const;

 private:
  std::map<std::string, BackendFactory> factories_;
};

/// Throws ConfigError when `block` holds a key such as "api_key" or "token".
void reject_inline_credentials(const std::string& name, const json& block);

}  // namespace forge::backend
