#include "forge/backend/http_backend.hpp"

#include <httplib.h>

#include <fstream>
#include <sstream>

#include "forge/util/error.hpp"
#include "forge/util/hash.hpp"
#include "forge/util/text.hpp"

namespace forge::backend {

namespace {

std::string mime_for(const std::filesystem::path& p) {
  auto ext = text::to_lower_ascii(p.extension().string());
  if (ext == ".png") return "image/png";
  if (ext == ".gif") return "image/gif";
  if (ext == ".webp") return "image/webp";
  return "image/jpeg";
}

bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

}  // namespace

Outcome outcome_for_status(int status) {
  if (status >= 200 && status < 300) return Outcome::Ok;
  if (status == 408) return Outcome::Timeout;
  if (status == 429 || status >= 500) return Outcome::TransportError;
  return Outcome::Refused;
}

HttpChatBackend::HttpChatBackend(HttpBackendConfig config) : config_(std::move(config)) {
  const std::string& url = config_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos || !(starts_with(url, "http://") || starts_with(url, "https://"))) {
    throw Error(Errc::ConfigError, "endpoint must be an http(s) URL: '" + url + "'");
  }
  if (config_.model.empty()) throw Error(Errc::ConfigError, "http backend needs a model id");
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  if (path_.size() < 17 || path_.substr(path_.size() - 17) != "/chat/completions") path_ += "/chat/completions";
}

std::string HttpChatBackend::image_url(const std::string& uri) const {
  if (starts_with(uri, "http://") || starts_with(uri, "https://") || starts_with(uri, "data:")) return uri;
  std::filesystem::path p = uri;
  if (starts_with(uri, "file://")) p = uri.substr(7);
  if (p.is_relative() && !config_.image_root.empty()) p = config_.image_root / p;
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read image " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return "data:" + mime_for(p) + ";base64," + base64_encode(buf.str());
}

json HttpChatBackend::payload(const ChatRequest& request) const {
  json messages = json::array();
  if (!request.system.empty()) messages.push_back({{"role", "system"}, {"content", request.system}});
  for (const auto& m : request.messages) {
    json msg{{"role", to_string(m.role)}};
    if (m.image_uri) {
      msg["content"] = json::array({json{{"type", "text"}, {"text", m.text}},
                                    json{{"type", "image_url"}, {"image_url", {{"url", image_url(*m.image_uri)}}}}});
    } else {
      msg["content"] = m.text;
    }
    messages.push_back(std::move(msg));
  }
  return json{{"model", config_.model},
              {"messages", std::move(messages)},
              {"temperature", request.temperature},
              {"max_tokens", request.max_output_chars}};
}

AttemptResult HttpChatBackend::send(const ChatRequest& request, const std::string& /*digest*/) {
  AttemptResult result;
  const auto body = payload(request).dump();
  httplib::Client client(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(config_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  const auto start = std::chrono::steady_clock::now();
  auto res = client.Post(path_, headers, body, "application/json");
  result.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (!res) {
    const auto err = res.error();
    result.outcome = (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
                         ? Outcome::Timeout
                         : Outcome::TransportError;
    result.error = httplib::to_string(err);
    return result;
  }
  result.outcome = outcome_for_status(res->status);
  if (result.outcome != Outcome::Ok) {
    result.error = "HTTP " + std::to_string(res->status) + ": " + std::string(text::prefix_chars(res->body, 300));
    return result;
  }
  try {
    const json j = json::parse(res->body);
    const json& choice = j.at("choices").at(0);
    if (choice.value("finish_reason", "") == "content_filter") {
      result.outcome = Outcome::Refused;
      result.error = "content filtered";
      return result;
    }
    const json& content = choice.at("message").at("content");
    result.text = content.is_string() ? content.get<std::string>() : std::string();
    if (text::char_count(result.text) > static_cast<std::size_t>(request.max_output_chars)) {
      result.text = std::string(text::prefix_chars(result.text, static_cast<std::size_t>(request.max_output_chars)));
    }
  } catch (const json::exception& e) {
    result.outcome = Outcome::TransportError;
    result.error = std::string("malformed completion body: ") + e.what();
  }
  return result;
}

}  // namespace forge::backend
