#include "forge/domain/corpus.hpp"

#include "forge/util/error.hpp"
#include "forge/util/jsonl.hpp"

namespace forge {

namespace {

template <typename T>
std::unordered_map<std::string, std::size_t> index_by_id(const std::vector<T>& items, std::string_view what) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!index.emplace(items[i].id, i).second) {
      throw Error(Errc::SchemaError, "duplicate " + std::string(what) + " id " + items[i].id);
    }
  }
  return index;
}

template <typename T>
const T* lookup(const std::vector<T>& items, const std::unordered_map<std::string, std::size_t>& index,
                std::string_view id) {
  const auto it = index.find(std::string(id));
  return it == index.end() ? nullptr : &items[it->second];
}

template <typename T, typename Decode>
std::vector<T> load_records(const std::filesystem::path& path, Decode decode) {
  std::vector<T> out;
  std::size_t row = 0;
  for (const auto& j : read_jsonl(path)) {
    ++row;
    try {
      out.push_back(decode(j));
    } catch (const Error& e) {
      throw Error(Errc::SchemaError, path.string() + " record " + std::to_string(row) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

Corpus::Corpus(std::vector<Character> characters, std::vector<ImageRecord> images, std::vector<Dialogue> dialogues)
    : characters_(std::move(characters)), images_(std::move(images)), dialogues_(std::move(dialogues)) {
  character_index_ = index_by_id(characters_, "character");
  image_index_ = index_by_id(images_, "image");
  dialogue_index_ = index_by_id(dialogues_, "dialogue");
}

const Character* Corpus::character(std::string_view id) const { return lookup(characters_, character_index_, id); }
const ImageRecord* Corpus::image(std::string_view id) const { return lookup(images_, image_index_, id); }
const Dialogue* Corpus::dialogue(std::string_view id) const { return lookup(dialogues_, dialogue_index_, id); }

const Character& Corpus::require_character(std::string_view id) const {
  if (const auto* c = character(id)) return *c;
  throw Error(Errc::InvalidArgument, "unknown character " + std::string(id));
}

const ImageRecord& Corpus::require_image(std::string_view id) const {
  if (const auto* i = image(id)) return *i;
  throw Error(Errc::InvalidArgument, "unknown image " + std::string(id));
}

const Dialogue& Corpus::require_dialogue(std::string_view id) const {
  if (const auto* d = dialogue(id)) return *d;
  throw Error(Errc::InvalidArgument, "unknown dialogue " + std::string(id));
}

Corpus Corpus::load(const std::filesystem::path& dir, Strictness strictness) {
  const auto maybe = [&](std::string_view name, auto loader) {
    const auto path = dir / name;
    using Result = decltype(loader(path, strictness));
    return std::filesystem::exists(path) ? loader(path, strictness) : Result{};
  };
  return Corpus(maybe(kCharactersFile, load_characters), maybe(kImagesFile, load_images),
                maybe(kDialoguesFile, load_dialogues));
}

std::vector<Character> load_characters(const std::filesystem::path& path, Strictness s) {
  return load_records<Character>(path, [s](const json& j) { return character_from_json(j, s); });
}

std::vector<ImageRecord> load_images(const std::filesystem::path& path, Strictness s) {
  return load_records<ImageRecord>(path, [s](const json& j) { return image_from_json(j, s); });
}

std::vector<Dialogue> load_dialogues(const std::filesystem::path& path, Strictness s) {
  return load_records<Dialogue>(path, [s](const json& j) { return dialogue_from_json(j, s); });
}

std::vector<TrainingSample> load_training_samples(const std::filesystem::path& path, Strictness s) {
  return load_records<TrainingSample>(path, [s](const json& j) { return training_sample_from_json(j, s); });
}

std::vector<TestSample> load_test_samples(const std::filesystem::path& path, Strictness s) {
  return load_records<TestSample>(path, [s](const json& j) { return test_sample_from_json(j, s); });
}

}  // namespace forge
