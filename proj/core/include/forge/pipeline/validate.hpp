#pragma once

#include <filesystem>
#include <optional>

#include "forge/domain/validation.hpp"

namespace forge::pipeline {

struct CorpusFiles {
  std::optional<std::filesystem::path> characters;
  std::optional<std::filesystem::path> images;
  std::optional<std::filesystem::path> dialogues;
  std::optional<std::filesystem::path> samples;
  std::optional<std::filesystem::path> test_samples;

  /// The standard file names inside `dir`, where they exist.
  static CorpusFiles in_dir(const std::filesystem::path& dir);
};

/// Every record and cross-record invariant over the given files. Unreadable
/// files and records that fail to decode are reported as violations.
ValidationReport validate_files(const CorpusFiles& files);

}  // namespace forge::pipeline
