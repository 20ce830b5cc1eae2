#pragma once

#include <chrono>
#include <filesystem>
#include <string>

#include "forge/backend/chat.hpp"

namespace forge::backend {

struct HttpBackendConfig {
  /// Base URL, e.g. "https://api.example.com/v1"; "/chat/completions" is appended
  /// unless already present.
  std::string endpoint;
  std::string model;
  /// Bearer token value, read from the environment by the caller. May be empty
  /// for local endpoints.
  std::string api_key;
  std::chrono::milliseconds timeout{60000};
  /// Relative image paths resolve against this directory.
  std::filesystem::path image_root;
};

/// OpenAI-style chat-completions client. Local images are inlined as base64
/// data URLs; http(s) and data: URIs are passed through.
class HttpChatBackend final : public ChatBackend {
 public:
  explicit HttpChatBackend(HttpBackendConfig config);

  AttemptResult send(const ChatRequest& request, const std::string& digest) override;
  std::string kind() const override { return "http"; }

  /// Request body for `request`; exposed for tests.
  json payload(const ChatRequest& request) const;

 private:
  std::string image_url(const std::string& uri) const;

  HttpBackendConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

/// 2xx -> Ok, 408 -> Timeout, 429 and 5xx -> TransportError, other 4xx -> Refused.
Outcome outcome_for_status(int status);

}  // namespace forge::backend
