#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace forge {

/// Lowercase hex SHA-256 of raw bytes.
std::string sha256_hex(std::string_view bytes);

/// Canonical JSON text: sorted keys, no whitespace, UTF-8 kept as-is.
std::string canonical_dump(const nlohmann::json& value);

/// "<prefix>_<first 16 hex chars of sha256(canonical_dump(content))>".
std::string content_id(std::string_view prefix, const nlohmann::json& content);

std::string base64_encode(std::string_view bytes);

}  // namespace forge
