#include "forge/util/rng.hpp"

#include <string>

#include "forge/util/hash.hpp"

namespace forge {

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key) {
  std::string material = std::to_string(seed);
  material.push_back('\x1f');
  material.append(key);
  const std::string hex = sha256_hex(material);
  return std::stoull(hex.substr(0, 16), nullptr, 16);
}

}  // namespace

KeyedRng::KeyedRng(std::uint64_t seed, std::string_view key) : engine_(derive_seed(seed, key)) {}

std::uint64_t KeyedRng::below(std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % bound;
}

double KeyedRng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

}  // namespace forge
