#include "forge/util/hash.hpp"

#include <array>

#include <openssl/evp.h>
#include <openssl/sha.h>

namespace forge {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest.data());
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(digest.size() * 2);
  for (unsigned char b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0f]);
  }
  return out;
}

std::string canonical_dump(const nlohmann::json& value) {
  // nlohmann::json objects are std::map backed, so dump() already emits sorted keys.
  return value.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string content_id(std::string_view prefix, const nlohmann::json& content) {
  std::string id(prefix);
  id.push_back('_');
  id += sha256_hex(canonical_dump(content)).substr(0, 16);
  return id;
}

std::string base64_encode(std::string_view bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int written = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                      reinterpret_cast<const unsigned char*>(bytes.data()),
                                      static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(written));
  return out;
}

}  // namespace forge
