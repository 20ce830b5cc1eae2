#include "forge/backend/registry.hpp"

#include <array>
#include <cstdlib>

#include "forge/backend/http_backend.hpp"
#include "forge/backend/scripted.hpp"
#include "forge/util/error.hpp"
#include "forge/util/text.hpp"

namespace forge::backend {

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path = p;
  return path.is_relative() ? base / path : path;
}

std::string require_string(const std::string& name, const json& block, const char* key) {
  const auto it = block.find(key);
  if (it == block.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw Error(Errc::ConfigError, "backend '" + name + "' needs a non-empty string '" + key + "'");
  }
  return it->get<std::string>();
}

std::shared_ptr<ChatBackend> make_scripted(const json& block, const FactoryContext& ctx) {
  return ScriptedBackend::from_file(resolve(ctx.base_dir, require_string(ctx.name, block, "script")));
}

std::shared_ptr<ChatBackend> make_http(const json& block, const FactoryContext& ctx) {
  HttpBackendConfig cfg;
  cfg.endpoint = require_string(ctx.name, block, "endpoint");
  cfg.model = require_string(ctx.name, block, "model");
  if (const auto it = block.find("api_key_env"); it != block.end()) {
    const auto var = it->get<std::string>();
    const char* value = std::getenv(var.c_str());
    if (value == nullptr || *value == '\0') {
      throw Error(Errc::ConfigError, "backend '" + ctx.name + "': environment variable " + var + " is not set");
    }
    cfg.api_key = value;
  }
  cfg.timeout = std::chrono::milliseconds(block.value("timeout_ms", 60000));
  if (const auto it = block.find("image_root"); it != block.end()) {
    cfg.image_root = resolve(ctx.base_dir, it->get<std::string>());
  } else {
    cfg.image_root = ctx.base_dir;
  }
  return std::make_shared<HttpChatBackend>(std::move(cfg));
}

}  // namespace

void reject_inline_credentials(const std::string& name, const json& block) {
  static constexpr std::array<std::string_view, 7> kForbidden = {"api_key", "apikey",   "key",          "token",
                                                                 "secret",  "password", "authorization"};
  for (const auto& [k, v] : block.items()) {
    const auto lower = text::to_lower_ascii(k);
    for (const auto bad : kForbidden) {
      if (lower == bad) {
        throw Error(Errc::ConfigError, "backend '" + name + "': credential field '" + k +
                                           "' is not allowed in config; use api_key_env to name an environment variable");
      }
    }
  }
}

BackendRegistry::BackendRegistry() {
  factories_["scripted"] = make_scripted;
  factories_["http"] = make_http;
}

void BackendRegistry::register_kind(const std::string& kind, BackendFactory factory) {
  factories_[kind] = std::move(factory);
}

bool BackendRegistry::has_kind(const std::string& kind) const { return factories_.count(kind) > 0; }

std::shared_ptr<BackendHandle> BackendRegistry::build_one(const std::string& name, const json& block,
                                                          const std::filesystem::path& base_dir,
                                                          const RetryPolicy& base_retry) const {
  if (!block.is_object()) throw Error(Errc::ConfigError, "backend '" + name + "' must be an object");
  reject_inline_credentials(name, block);
  const auto kind = require_string(name, block, "kind");
  const auto it = factories_.find(kind);
  if (it == factories_.end()) throw Error(Errc::ConfigError, "backend '" + name + "': unknown kind '" + kind + "'");

  RetryPolicy retry = base_retry;
  retry.max_attempts = block.value("max_attempts", retry.max_attempts);
  retry.initial_backoff = std::chrono::milliseconds(block.value("initial_backoff_ms", retry.initial_backoff.count()));
  retry.max_backoff = std::chrono::milliseconds(block.value("max_backoff_ms", retry.max_backoff.count()));
  BackendLimits limits;
  limits.max_in_flight = block.value("max_in_flight", limits.max_in_flight);
  limits.requests_per_minute = block.value("requests_per_minute", limits.requests_per_minute);

  auto handle = std::make_shared<BackendHandle>(name, it->second(block, FactoryContext{name, base_dir}), retry, limits);
  handle->model_version = block.value("model_version", std::string());
  return handle;
}

std::map<std::string, std::shared_ptr<BackendHandle>> BackendRegistry::build(const json& backends,
                                                                             const std::filesystem::path& base_dir,
                                                                             const RetryPolicy& base_retry) const {
  if (!backends.is_object()) throw Error(Errc::ConfigError, "'backends' must be an object");
  std::map<std::string, std::shared_ptr<BackendHandle>> out;
  for (const auto& [name, block] : backends.items()) out[name] = build_one(name, block, base_dir, base_retry);
  return out;
}

}  // namespace forge::backend
