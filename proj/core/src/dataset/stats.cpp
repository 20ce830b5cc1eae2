#include "forge/dataset/stats.hpp"

#include "forge/util/text.hpp"

namespace forge::dataset {

std::size_t count_tokens(std::string_view s) {
  std::size_t tokens = 0;
  bool in_run = false;
  for (char32_t cp : text::decode_utf8(s)) {
    if (text::is_cjk(cp)) {
      ++tokens;
      in_run = false;
    } else if (text::is_word_char(cp)) {
      if (!in_run) ++tokens;
      in_run = true;
    } else {
      in_run = false;
    }
  }
  return tokens;
}

std::optional<double> StatsCell::mean_turns() const {
  if (dialogues == 0) return std::nullopt;
  return static_cast<double>(turns) / static_cast<double>(dialogues);
}

std::optional<double> StatsCell::mean_tokens() const {
  if (dialogues == 0) return std::nullopt;
  return static_cast<double>(tokens) / static_cast<double>(dialogues);
}

void StatsCell::add(std::size_t turn_count, std::size_t token_count) {
  ++dialogues;
  turns += turn_count;
  tokens += token_count;
}

void StatsCell::merge(const StatsCell& o) {
  dialogues += o.dialogues;
  turns += o.turns;
  tokens += o.tokens;
}

namespace {

ScenarioRow& row(CorpusStats& s, std::string_view split) { return s.by_split[std::string(split)]; }

void init(CorpusStats& s) {
  for (auto split : {Split::Train, Split::InTest, Split::OutTest}) row(s, to_string(split));
  row(s, "All");
}

}  // namespace

CorpusStats corpus_stats(const std::vector<Dialogue>& dialogues) {
  CorpusStats s;
  init(s);
  for (const auto& d : dialogues) {
    std::size_t tokens = 0;
    for (const auto& t : d.turns) tokens += count_tokens(t.text);
    const auto slot = static_cast<std::size_t>(d.scenario);
    for (auto* r : {&row(s, to_string(d.split)), &row(s, "All")}) {
      (*r)[slot].add(d.turns.size(), tokens);
      (*r)[kOverallSlot].add(d.turns.size(), tokens);
    }
  }
  return s;
}

CorpusStats corpus_stats(const Corpus& corpus) {
  CorpusStats s = corpus_stats(corpus.dialogues());
  s.characters = corpus.characters().size();
  for (auto split : {Split::Train, Split::InTest, Split::OutTest}) s.characters_by_split[std::string(to_string(split))] = 0;
  for (const auto& c : corpus.characters()) ++s.characters_by_split[std::string(to_string(c.split))];
  for (const auto& img : corpus.images()) {
    (img.kind == ImageKind::Generic ? s.generic_images : s.character_images) += 1;
  }
  return s;
}

nlohmann::json to_json(const CorpusStats& s) {
  auto cell = [](const StatsCell& c) {
    nlohmann::json j{{"dialogues", c.dialogues}, {"turns", c.turns}, {"tokens", c.tokens}};
    j["turns_per_dialogue"] = c.mean_turns() ? nlohmann::json(*c.mean_turns()) : nlohmann::json(nullptr);
    j["tokens_per_dialogue"] = c.mean_tokens() ? nlohmann::json(*c.mean_tokens()) : nlohmann::json(nullptr);
    return j;
  };
  nlohmann::json splits = nlohmann::json::object();
  for (const auto& [name, r] : s.by_split) {
    splits[name] = {{"Commentary", cell(r[0])}, {"HumanRole", cell(r[1])}, {"InterRole", cell(r[2])},
                    {"Overall", cell(r[kOverallSlot])}};
  }
  return nlohmann::json{{"splits", std::move(splits)},
                        {"characters", s.characters},
                        {"characters_by_split", s.characters_by_split},
                        {"images", {{"Generic", s.generic_images}, {"CharacterRelated", s.character_images}}}};
}

}  // namespace forge::dataset
