#include "forge/domain/codec.hpp"

#include "forge/util/error.hpp"

namespace forge {

FieldReader::FieldReader(const json& object, std::string_view record_type, Strictness strictness)
    : object_(object), type_(record_type), strictness_(strictness) {
  if (!object_.is_object()) throw Error(Errc::SchemaError, type_ + ": expected a JSON object");
}

const json& FieldReader::required(std::string_view key) {
  const auto it = object_.find(std::string(key));
  if (it == object_.end()) throw Error(Errc::SchemaError, type_ + ": missing field '" + std::string(key) + "'");
  seen_.emplace(key);
  return *it;
}

const json* FieldReader::optional(std::string_view key) {
  const auto it = object_.find(std::string(key));
  seen_.emplace(key);
  if (it == object_.end() || it->is_null()) return nullptr;
  return &*it;
}

std::string FieldReader::string(std::string_view key) {
  const auto& v = required(key);
  if (!v.is_string()) throw Error(Errc::SchemaError, type_ + ": field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> FieldReader::optional_string(std::string_view key) {
  const auto* v = optional(key);
  if (!v) return std::nullopt;
  if (!v->is_string()) throw Error(Errc::SchemaError, type_ + ": field '" + std::string(key) + "' must be a string");
  return v->get<std::string>();
}

std::int64_t FieldReader::integer(std::string_view key) {
  const auto& v = required(key);
  if (!v.is_number_integer()) throw Error(Errc::SchemaError, type_ + ": field '" + std::string(key) + "' must be an integer");
  return v.get<std::int64_t>();
}

double FieldReader::number(std::string_view key) {
  const auto& v = required(key);
  if (!v.is_number()) throw Error(Errc::SchemaError, type_ + ": field '" + std::string(key) + "' must be a number");
  return v.get<double>();
}

void FieldReader::finish() const {
  if (strictness_ == Strictness::Lenient) return;
  for (const auto& [key, value] : object_.items()) {
    if (!seen_.contains(key)) throw Error(Errc::SchemaError, type_ + ": unknown field '" + key + "'");
  }
}

namespace {

std::vector<std::string> string_list(const json& v, std::string_view what) {
  if (!v.is_array()) throw Error(Errc::SchemaError, std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string()) throw Error(Errc::SchemaError, std::string(what) + " items must be strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

json turns_json(const std::vector<Turn>& turns) {
  json arr = json::array();
  for (const auto& t : turns) arr.push_back(to_json(t));
  return arr;
}

std::vector<Turn> turns_from(const json& v, Strictness s) {
  if (!v.is_array()) throw Error(Errc::SchemaError, "turns must be an array");
  std::vector<Turn> turns;
  for (const auto& item : v) turns.push_back(turn_from_json(item, s));
  return turns;
}

void write_sample_fields(json& j, const TrainingSample& v) {
  j["id"] = v.id;
  j["dialogue_id"] = v.dialogue_id;
  j["image_id"] = v.image_id;
  j["target_turn_index"] = v.target_turn_index;
  j["context"] = turns_json(v.context);
  j["prompt"] = v.prompt;
  j["target"] = v.target;
}

void read_sample_fields(FieldReader& r, TrainingSample& v, Strictness s) {
  v.id = r.string("id");
  v.dialogue_id = r.string("dialogue_id");
  v.image_id = r.string("image_id");
  v.target_turn_index = static_cast<int>(r.integer("target_turn_index"));
  v.context = turns_from(r.required("context"), s);
  v.prompt = r.string("prompt");
  v.target = r.string("target");
}

}  // namespace

json to_json(const Profile& v) {
  json j{{"brief_introduction", v.brief_introduction},
         {"personality", v.personality},
         {"life_story", v.life_story},
         {"relationships", v.relationships},
         {"catchphrases", v.catchphrases}};
  if (v.simplified) j["simplified"] = *v.simplified;
  return j;
}

json to_json(const Character& v) {
  return json{{"id", v.id},
              {"name", v.name},
              {"series", v.series},
              {"category", to_string(v.category)},
              {"language", to_string(v.language)},
              {"split", to_string(v.split)},
              {"profile", to_json(v.profile)}};
}

json to_json(const MetaInfo& v) {
  return json{{"name", v.name},
              {"gender", v.gender},
              {"personality_brief", v.personality_brief},
              {"background_brief", v.background_brief}};
}

json to_json(const ImageRecord& v) {
  json j{{"id", v.id}, {"uri", v.uri}, {"kind", to_string(v.kind)}};
  if (v.annotation) {
    j["annotation"] = json{{"characters", v.annotation->characters},
                           {"place", v.annotation->place},
                           {"scene", v.annotation->scene}};
  }
  if (v.owner_character) j["owner_character"] = *v.owner_character;
  return j;
}

json to_json(const Turn& v) {
  return json{{"speaker", v.speaker.str()}, {"text", v.text}, {"index", v.index}};
}

json to_json(const Dialogue& v) {
  return json{{"id", v.id},
              {"scenario", to_string(v.scenario)},
              {"image", v.image},
              {"speaker_a", v.speaker_a.str()},
              {"speaker_b", v.speaker_b},
              {"turns", turns_json(v.turns)},
              {"language", to_string(v.language)},
              {"split", to_string(v.split)}};
}

json to_json(const TrainingSample& v) {
  json j = json::object();
  write_sample_fields(j, v);
  return j;
}

json to_json(const TestSample& v) {
  json j = json::object();
  write_sample_fields(j, v);
  j["ground_truth"] = v.ground_truth;
  j["rng_seed"] = v.rng_seed;
  return j;
}

Profile profile_from_json(const json& j, Strictness s) {
  FieldReader r(j, "Profile", s);
  Profile v;
  v.brief_introduction = r.string("brief_introduction");
  v.personality = r.string("personality");
  v.life_story = r.string("life_story");
  v.relationships = r.string("relationships");
  v.catchphrases = string_list(r.required("catchphrases"), "catchphrases");
  v.simplified = r.optional_string("simplified");
  r.finish();
  return v;
}

Character character_from_json(const json& j, Strictness s) {
  FieldReader r(j, "Character", s);
  Character v;
  v.id = r.string("id");
  v.name = r.string("name");
  v.series = r.string("series");
  v.category = parse_category(r.string("category"));
  v.language = parse_language(r.string("language"));
  v.split = parse_split(r.string("split"));
  v.profile = profile_from_json(r.required("profile"), s);
  r.finish();
  return v;
}

MetaInfo meta_info_from_json(const json& j, Strictness s) {
  FieldReader r(j, "MetaInfo", s);
  MetaInfo v;
  v.name = r.string("name");
  v.gender = r.string("gender");
  v.personality_brief = r.string("personality_brief");
  v.background_brief = r.string("background_brief");
  r.finish();
  return v;
}

ImageRecord image_from_json(const json& j, Strictness s) {
  FieldReader r(j, "ImageRecord", s);
  ImageRecord v;
  v.id = r.string("id");
  v.uri = r.string("uri");
  v.kind = parse_image_kind(r.string("kind"));
  if (const auto* a = r.optional("annotation")) {
    FieldReader ar(*a, "ImageAnnotation", s);
    ImageAnnotation ann;
    ann.characters = string_list(ar.required("characters"), "annotation.characters");
    ann.place = ar.string("place");
    ann.scene = ar.string("scene");
    ar.finish();
    v.annotation = std::move(ann);
  }
  v.owner_character = r.optional_string("owner_character");
  r.finish();
  return v;
}

Turn turn_from_json(const json& j, Strictness s) {
  FieldReader r(j, "Turn", s);
  Turn v;
  v.speaker = Speaker::parse(r.string("speaker"));
  v.text = r.string("text");
  v.index = static_cast<int>(r.integer("index"));
  r.finish();
  return v;
}

Dialogue dialogue_from_json(const json& j, Strictness s) {
  FieldReader r(j, "Dialogue", s);
  Dialogue v;
  v.id = r.string("id");
  v.scenario = parse_scenario(r.string("scenario"));
  v.image = r.string("image");
  v.speaker_a = Speaker::parse(r.string("speaker_a"));
  v.speaker_b = r.string("speaker_b");
  v.turns = turns_from(r.required("turns"), s);
  v.language = parse_language(r.string("language"));
  v.split = parse_split(r.string("split"));
  r.finish();
  return v;
}

TrainingSample training_sample_from_json(const json& j, Strictness s) {
  FieldReader r(j, "TrainingSample", s);
  TrainingSample v;
  read_sample_fields(r, v, s);
  r.finish();
  return v;
}

TestSample test_sample_from_json(const json& j, Strictness s) {
  FieldReader r(j, "TestSample", s);
  TestSample v;
  read_sample_fields(r, v, s);
  v.ground_truth = r.string("ground_truth");
  const auto& seed = r.required("rng_seed");
  if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
    throw Error(Errc::SchemaError, "TestSample: rng_seed must be an integer");
  }
  v.rng_seed = seed.get<std::uint64_t>();
  r.finish();
  return v;
}

}  // namespace forge
