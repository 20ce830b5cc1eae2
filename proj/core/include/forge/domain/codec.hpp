#pragma once

#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "forge/domain/types.hpp"

namespace forge {

using json = nlohmann::json;

/// Strict decoding rejects unknown fields; lenient decoding ignores them.
enum class Strictness { Strict, Lenient };

/// Tracks which keys of an object were consumed so strict decoding can
/// report leftovers. Shared by every record codec in the library.
class FieldReader {
 public:
  FieldReader(const json& object, std::string_view record_type, Strictness strictness);

  const json& required(std::string_view key);
  const json* optional(std::string_view key);
  std::string string(std::string_view key);
  std::optional<std::string> optional_string(std::string_view key);
  std::int64_t integer(std::string_view key);
  double number(std::string_view key);
  void finish() const;

 private:
  const json& object_;
  std::string type_;
  Strictness strictness_;
  std::set<std::string, std::less<>> seen_;
};

json to_json(const Profile& v);
json to_json(const Character& v);
json to_json(const MetaInfo& v);
json to_json(const ImageRecord& v);
json to_json(const Turn& v);
json to_json(const Dialogue& v);
json to_json(const TrainingSample& v);
json to_json(const TestSample& v);

Profile profile_from_json(const json& j, Strictness s = Strictness::Strict);
Character character_from_json(const json& j, Strictness s = Strictness::Strict);
MetaInfo meta_info_from_json(const json& j, Strictness s = Strictness::Strict);
ImageRecord image_from_json(const json& j, Strictness s = Strictness::Strict);
Turn turn_from_json(const json& j, Strictness s = Strictness::Strict);
Dialogue dialogue_from_json(const json& j, Strictness s = Strictness::Strict);
TrainingSample training_sample_from_json(const json& j, Strictness s = Strictness::Strict);
TestSample test_sample_from_json(const json& j, Strictness s = Strictness::Strict);

}  // namespace forge
