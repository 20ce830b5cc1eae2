#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "forge/domain/codec.hpp"
#include "forge/domain/types.hpp"

namespace forge {

inline constexpr std::string_view kCharactersFile = "characters.jsonl";
inline constexpr std::string_view kImagesFile = "images.jsonl";
inline constexpr std::string_view kDialoguesFile = "dialogues.jsonl";
inline constexpr std::string_view kSamplesFile = "samples.jsonl";
inline constexpr std::string_view kTestSamplesFile = "test_samples.jsonl";

/// Immutable registry of characters, images and dialogues with id lookup.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Character> characters, std::vector<ImageRecord> images, std::vector<Dialogue> dialogues);

  const std::vector<Character>& characters() const { return characters_; }
  const std::vector<ImageRecord>& images() const { return images_; }
  const std::vector<Dialogue>& dialogues() const { return dialogues_; }

  const Character* character(std::string_view id) const;
  const ImageRecord* image(std::string_view id) const;
  const Dialogue* dialogue(std::string_view id) const;

  const Character& require_character(std::string_view id) const;
  const ImageRecord& require_image(std::string_view id) const;
  const Dialogue& require_dialogue(std::string_view id) const;

  /// Loads the three JSONL files from `dir`; a missing file is an empty list.
  static Corpus load(const std::filesystem::path& dir, Strictness strictness = Strictness::Strict);

 private:
  std::vector<Character> characters_;
  std::vector<ImageRecord> images_;
  std::vector<Dialogue> dialogues_;
  std::unordered_map<std::string, std::size_t> character_index_;
  std::unordered_map<std::string, std::size_t> image_index_;
  std::unordered_map<std::string, std::size_t> dialogue_index_;
};

std::vector<Character> load_characters(const std::filesystem::path& path, Strictness s = Strictness::Strict);
std::vector<ImageRecord> load_images(const std::filesystem::path& path, Strictness s = Strictness::Strict);
std::vector<Dialogue> load_dialogues(const std::filesystem::path& path, Strictness s = Strictness::Strict);
std::vector<TrainingSample> load_training_samples(const std::filesystem::path& path,
                                                  Strictness s = Strictness::Strict);
std::vector<TestSample> load_test_samples(const std::filesystem::path& path, Strictness s = Strictness::Strict);

}  // namespace forge
