#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "forge/domain/corpus.hpp"

namespace forge::dataset {

/// Letter/digit runs count as one token each; every CJK code point is its
/// own token; punctuation and whitespace separate tokens.
std::size_t count_tokens(std::string_view text);

struct StatsCell {
  std::size_t dialogues = 0;
  std::uint64_t turns = 0;
  std::uint64_t tokens = 0;

  /// Absent for an empty cell.
  std::optional<double> mean_turns() const;
  std::optional<double> mean_tokens() const;
  void add(std::size_t turn_count, std::size_t token_count);
  void merge(const StatsCell& other);
};

/// Scenario slots plus a final "overall" slot.
using ScenarioRow = std::array<StatsCell, 4>;
inline constexpr std::size_t kOverallSlot = 3;

struct CorpusStats {
  /// Keyed by split name plus "All".
  std::map<std::string, ScenarioRow> by_split;
  std::map<std::string, std::size_t> characters_by_split;
  std::size_t characters = 0;
  std::size_t generic_images = 0;
  std::size_t character_images = 0;

  const ScenarioRow& all() const { return by_split.at("All"); }
};

CorpusStats corpus_stats(const Corpus& corpus);
CorpusStats corpus_stats(const std::vector<Dialogue>& dialogues);

nlohmann::json to_json(const CorpusStats& s);

}  // namespace forge::dataset
