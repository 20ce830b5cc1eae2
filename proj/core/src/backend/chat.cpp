#include "forge/backend/chat.hpp"

#include "forge/domain/codec.hpp"
#include "forge/util/error.hpp"
#include "forge/util/hash.hpp"

namespace forge::backend {

std::string_view to_string(ChatRole role) { return role == ChatRole::User ? "user" : "assistant"; }

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Ok: return "Ok";
    case Outcome::Refused: return "Refused";
    case Outcome::TransportError: return "TransportError";
    case Outcome::Timeout: return "Timeout";
  }
  return "?";
}

Outcome parse_outcome(std::string_view s) {
  for (auto o : {Outcome::Ok, Outcome::Refused, Outcome::TransportError, Outcome::Timeout}) {
    if (to_string(o) == s) return o;
  }
  throw Error(Errc::SchemaError, "unknown outcome '" + std::string(s) + "'");
}

ChatRequest make_request(std::string system, std::string user_text, std::optional<std::string> image_uri,
                         std::string request_tag, double temperature, int max_output_chars) {
  ChatRequest request;
  request.system = std::move(system);
  request.messages.push_back({ChatRole::User, std::move(user_text), std::move(image_uri)});
  request.temperature = temperature;
  request.max_output_chars = max_output_chars;
  request.request_tag = std::move(request_tag);
  return request;
}

void validate_request(const ChatRequest& request) {
  if (request.messages.empty()) throw Error(Errc::InvalidArgument, "chat request has no messages");
  int images = 0;
  for (const auto& m : request.messages) images += m.image_uri ? 1 : 0;
  if (images > 1) throw Error(Errc::InvalidArgument, "chat request carries more than one image");
  if (request.temperature < 0.0) throw Error(Errc::InvalidArgument, "temperature must be >= 0");
  if (request.max_output_chars <= 0) throw Error(Errc::InvalidArgument, "max_output_chars must be positive");
}

json canonical_request(const ChatRequest& request) {
  json messages = json::array();
  for (const auto& m : request.messages) {
    json msg{{"role", to_string(m.role)}, {"text", m.text}};
    if (m.image_uri) msg["image"] = *m.image_uri;
    messages.push_back(std::move(msg));
  }
  return json{{"system", request.system},
              {"messages", std::move(messages)},
              {"temperature", request.temperature},
              {"max_output_chars", request.max_output_chars}};
}

std::string request_digest(const ChatRequest& request) { return sha256_hex(canonical_dump(canonical_request(request))); }

json to_json(const BackendRecord& r) {
  return json{{"backend", r.backend},       {"request_tag", r.request_tag}, {"request_digest", r.request_digest},
              {"response", r.response},     {"latency_ms", r.latency_ms},   {"attempts", r.attempts},
              {"outcome", to_string(r.outcome)}, {"error", r.error}};
}

BackendRecord backend_record_from_json(const json& j) {
  FieldReader reader(j, "BackendRecord", Strictness::Strict);
  BackendRecord r;
  r.backend = reader.string("backend");
  r.request_tag = reader.string("request_tag");
  r.request_digest = reader.string("request_digest");
  r.response = reader.string("response");
  r.latency_ms = reader.number("latency_ms");
  r.attempts = static_cast<int>(reader.integer("attempts"));
  r.outcome = parse_outcome(reader.string("outcome"));
  r.error = reader.string("error");
  reader.finish();
  return r;
}

const std::string& require_ok(const BackendRecord& record) {
  if (!record.ok()) {
    throw Error(Errc::BackendError, record.backend + " returned " + std::string(to_string(record.outcome)) +
                                        " after " + std::to_string(record.attempts) + " attempt(s) for '" +
                                        record.request_tag + "': " + record.error);
  }
  return record.response;
}

}  // namespace forge::backend
