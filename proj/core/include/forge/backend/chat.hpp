#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace forge::backend {

using json = nlohmann::json;

enum class ChatRole { User, Assistant };
enum class Outcome { Ok, Refused, TransportError, Timeout };

std::string_view to_string(ChatRole role);
std::string_view to_string(Outcome outcome);
Outcome parse_outcome(std::string_view s);

struct ChatMessage {
  ChatRole role = ChatRole::User;
  std::string text;
  std::optional<std::string> image_uri;
};

struct ChatRequest {
  std::string system;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_output_chars = 4000;
  /// Provenance label for logs; deliberately excluded from the digest.
  std::string request_tag;
};

/// Convenience for the common single-user-turn request.
ChatRequest make_request(std::string system, std::string user_text, std::optional<std::string> image_uri,
                         std::string request_tag, double temperature = 0.0, int max_output_chars = 4000);

/// Throws InvalidArgument unless messages are non-empty, at most one image is
/// attached, temperature >= 0 and max_output_chars > 0.
void validate_request(const ChatRequest& request);

/// Canonical JSON of everything except request_tag.
json canonical_request(const ChatRequest& request);

/// SHA-256 of canonical_request; stable under key reordering and tag changes.
std::string request_digest(const ChatRequest& request);

/// Result of a single transport attempt.
struct AttemptResult {
  Outcome outcome = Outcome::TransportError;
  std::string text;
  std::string error;
  double latency_ms = 0.0;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual AttemptResult send(const ChatRequest& request, const std::string& digest) = 0;
  virtual std::string kind() const = 0;
};

struct BackendRecord {
  std::string backend;
  std::string request_tag;
  std::string request_digest;
  std::string response;
  double latency_ms = 0.0;
  int attempts = 0;
  Outcome outcome = Outcome::TransportError;
  std::string error;

  bool ok() const { return outcome == Outcome::Ok; }
};

json to_json(const BackendRecord& record);
BackendRecord backend_record_from_json(const json& j);

/// Response text of an Ok record; throws BackendError otherwise.
const std::string& require_ok(const BackendRecord& record);

}  // namespace forge::backend
