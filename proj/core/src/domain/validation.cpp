#include "forge/domain/validation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "forge/domain/ids.hpp"
#include "forge/util/text.hpp"

namespace forge {

void ValidationReport::add(std::string record_id, std::string rule, std::string message) {
  violations.push_back({std::move(record_id), std::move(rule), std::move(message)});
}

void ValidationReport::merge(const ValidationReport& other) {
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

bool ValidationReport::has_rule(std::string_view rule) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.rule == rule; });
}

namespace {

bool blank(std::string_view s) { return text::trim(s).empty(); }

}  // namespace

ValidationReport validate_profile(const Profile& profile, const std::string& owner_id) {
  ValidationReport report;
  const auto require = [&](const std::string& value, const char* rule, const char* message) {
    if (blank(value)) report.add(owner_id, rule, message);
  };
  require(profile.brief_introduction, "profile.brief_introduction", "missing brief introduction");
  require(profile.personality, "profile.personality", "missing personality");
  require(profile.life_story, "profile.life_story", "missing life story");
  require(profile.relationships, "profile.relationships", "missing relationships");
  if (profile.catchphrases.empty() ||
      std::all_of(profile.catchphrases.begin(), profile.catchphrases.end(), [](const auto& p) { return blank(p); })) {
    report.add(owner_id, "profile.catchphrases", "missing catchphrases");
  } else if (std::any_of(profile.catchphrases.begin(), profile.catchphrases.end(),
                         [](const auto& p) { return blank(p); })) {
    report.add(owner_id, "profile.catchphrases", "empty catchphrase entry");
  }
  if (profile.simplified) {
    if (blank(*profile.simplified)) {
      report.add(owner_id, "profile.simplified", "simplified profile is empty");
    } else if (text::char_count(*profile.simplified) > text::char_count(render_profile(profile))) {
      report.add(owner_id, "profile.simplified", "simplified profile is longer than the full profile");
    }
  }
  return report;
}

ValidationReport validate_character(const Character& character) {
  ValidationReport report;
  const std::string& id = character.id;
  if (id.empty()) {
    report.add(id, "character.id", "missing id");
  } else if (id != compute_id(character)) {
    report.add(id, "character.id", "id does not match content hash " + compute_id(character));
  }
  if (blank(character.name)) report.add(id, "character.name", "missing name");
  if (blank(character.series)) report.add(id, "character.series", "missing series");
  report.merge(validate_profile(character.profile, id));
  return report;
}

ValidationReport validate_meta_info(const MetaInfo& meta, const std::string& label) {
  ValidationReport report;
  if (blank(meta.name)) report.add(label, "meta.name", "missing name");
  if (blank(meta.gender)) report.add(label, "meta.gender", "missing gender");
  if (blank(meta.personality_brief)) report.add(label, "meta.personality_brief", "missing personality");
  if (blank(meta.background_brief)) report.add(label, "meta.background_brief", "missing background");
  return report;
}

ValidationReport validate_image(const ImageRecord& image) {
  ValidationReport report;
  const std::string& id = image.id;
  if (id.empty() || id != compute_id(image)) report.add(id, "image.id", "id does not match content hash");
  if (blank(image.uri)) report.add(id, "image.uri", "missing uri");
  if (image.kind == ImageKind::CharacterRelated) {
    if (!image.annotation) report.add(id, "image.annotation", "character-related image without annotation");
    if (!image.owner_character) report.add(id, "image.owner", "character-related image without owner character");
    if (image.annotation && (blank(image.annotation->place) || blank(image.annotation->scene) ||
                             image.annotation->characters.empty())) {
      report.add(id, "image.annotation", "annotation needs characters, place and scene");
    }
  } else if (image.annotation) {
    report.add(id, "image.annotation", "generic image must not carry an annotation");
  }
  return report;
}

ValidationReport validate_dialogue(const Dialogue& d) {
  ValidationReport report;
  const std::string& id = d.id;
  if (id.empty() || id != compute_id(d)) report.add(id, "dialogue.id", "id does not match content hash");
  if (d.speaker_b.empty() || d.speaker_b == Speaker::kHumanUser) {
    report.add(id, "dialogue.speaker_b", "speaker_b must be a character id");
  }
  if (d.turns.empty()) {
    report.add(id, "dialogue.turns", "dialogue has no turns");
    return report;
  }
  for (std::size_t i = 0; i < d.turns.size(); ++i) {
    const Turn& t = d.turns[i];
    if (t.index != static_cast<int>(i)) {
      report.add(id, "turn.index", "turn indices must be contiguous from 0 (turn " + std::to_string(i) + ")");
    }
    if (blank(t.text)) report.add(id, "turn.text", "turn " + std::to_string(i) + " has empty text");
  }
  const Speaker role_b = Speaker::character(d.speaker_b);
  const auto alternates = [&](const Speaker& first, const Speaker& second) {
    for (std::size_t i = 0; i < d.turns.size(); ++i) {
      const Speaker& expected = (i % 2 == 0) ? first : second;
      if (!(d.turns[i].speaker == expected)) return false;
    }
    return true;
  };
  switch (d.scenario) {
    case Scenario::Commentary:
      if (!d.speaker_a.is_human()) report.add(id, "dialogue.speaker_a", "commentary speaker_a must be HumanUser");
      if (d.turns.size() != 1) report.add(id, "dialogue.structure", "commentary must have exactly one turn");
      if (!(d.turns.front().speaker == role_b)) {
        report.add(id, "dialogue.structure", "commentary turn must be spoken by the character");
      }
      break;
    case Scenario::HumanRole:
      if (!d.speaker_a.is_human()) report.add(id, "dialogue.speaker_a", "human-role speaker_a must be HumanUser");
      if (d.turns.size() < 2) report.add(id, "dialogue.structure", "human-role dialogue needs at least two turns");
      if (!alternates(Speaker::human(), role_b)) {
        report.add(id, "dialogue.structure", "human-role turns must alternate starting with HumanUser");
      }
      break;
    case Scenario::InterRole:
      if (d.speaker_a.is_human()) {
        report.add(id, "dialogue.speaker_a", "inter-role speaker_a must be a character");
      } else if (d.speaker_a.character_id() == d.speaker_b) {
        report.add(id, "dialogue.speaker_a", "inter-role speakers must differ");
      }
      if (d.turns.size() < 2) report.add(id, "dialogue.structure", "inter-role dialogue needs at least two turns");
      if (!alternates(d.speaker_a, role_b) && !alternates(role_b, d.speaker_a)) {
        report.add(id, "dialogue.structure", "inter-role turns must alternate between the two characters");
      }
      break;
  }
  return report;
}

ValidationReport validate_corpus(const Corpus& corpus) {
  ValidationReport report;
  for (const auto& c : corpus.characters()) report.merge(validate_character(c));
  for (const auto& img : corpus.images()) {
    report.merge(validate_image(img));
    if (img.owner_character && !corpus.character(*img.owner_character)) {
      report.add(img.id, "image.owner", "owner character " + *img.owner_character + " not found");
    }
  }
  for (const auto& d : corpus.dialogues()) {
    report.merge(validate_dialogue(d));
    const auto* image = corpus.image(d.image);
    if (!image) report.add(d.id, "dialogue.image", "image " + d.image + " not found");

    std::vector<const Character*> cast;
    const auto resolve = [&](const std::string& cid) {
      const auto* c = corpus.character(cid);
      if (!c) {
        report.add(d.id, "dialogue.character", "character " + cid + " not found");
      } else {
        cast.push_back(c);
      }
    };
    resolve(d.speaker_b);
    if (!d.speaker_a.is_human()) resolve(d.speaker_a.character_id());

    for (const auto* c : cast) {
      if (c->language != d.language) {
        report.add(d.id, "dialogue.language", "dialogue language differs from character " + c->id);
      }
      const bool allowed = d.split == Split::OutTest ? c->split == Split::OutTest
                           : d.split == Split::Train ? c->split == Split::Train
                                                     : c->split != Split::OutTest;
      if (!allowed) {
        report.add(d.id, "dialogue.split",
                   std::string(to_string(c->split)) + " character in a " + std::string(to_string(d.split)) +
                       " dialogue");
      }
    }
    if (d.scenario == Scenario::InterRole && cast.size() == 2 && cast[0]->series != cast[1]->series) {
      report.add(d.id, "dialogue.series", "inter-role characters must share a series");
    }
    if (image && image->kind == ImageKind::CharacterRelated) {
      const bool owned = image->owner_character &&
                         std::any_of(cast.begin(), cast.end(),
                                     [&](const Character* c) { return c->id == *image->owner_character; });
      if (!owned) report.add(d.id, "dialogue.image", "character-related image used outside its owner's dialogues");
      if (!image->annotation) {
        report.add(d.id, "dialogue.image", "dialogue uses character-related image without annotation");
      }
    }
  }
  return report;
}

namespace {

void check_sample(const TrainingSample& s, const Corpus& corpus, ValidationReport& report) {
  const auto* d = corpus.dialogue(s.dialogue_id);
  if (!d) {
    report.add(s.id, "sample.dialogue", "dialogue " + s.dialogue_id + " not found");
    return;
  }
  if (s.image_id != d->image) report.add(s.id, "sample.image", "image id differs from the dialogue's image");
  if (s.target_turn_index < 0 || s.target_turn_index >= static_cast<int>(d->turns.size())) {
    report.add(s.id, "sample.target", "target turn index out of range");
    return;
  }
  const Turn& target = d->turns[static_cast<std::size_t>(s.target_turn_index)];
  if (target.speaker.is_human()) report.add(s.id, "sample.target", "target turn is not spoken by a character");
  if (s.target != target.text) report.add(s.id, "sample.target", "target text differs from the corpus turn");
  const std::vector<Turn> prefix(d->turns.begin(), d->turns.begin() + s.target_turn_index);
  if (s.context != prefix) report.add(s.id, "sample.context", "context is not the strict prefix of the target turn");
}

}  // namespace

ValidationReport validate_training_samples(const std::vector<TrainingSample>& samples, const Corpus& corpus) {
  ValidationReport report;
  for (const auto& s : samples) {
    check_sample(s, corpus, report);
    if (const auto* d = corpus.dialogue(s.dialogue_id); d && d->split != Split::Train) {
      report.add(s.id, "sample.split", "training sample drawn from a test dialogue");
    }
  }
  return report;
}

ValidationReport validate_test_samples(const std::vector<TestSample>& samples, const Corpus& corpus) {
  ValidationReport report;
  std::map<std::string, int> per_dialogue;
  for (const auto& s : samples) {
    check_sample(s, corpus, report);
    if (s.ground_truth != s.target) report.add(s.id, "sample.ground_truth", "ground truth differs from target");
    ++per_dialogue[s.dialogue_id];
  }
  for (const auto& d : corpus.dialogues()) {
    if (d.split == Split::Train) continue;
    const int n = per_dialogue.count(d.id) ? per_dialogue[d.id] : 0;
    if (n != 1 && !samples.empty()) {
      report.add(d.id, "sample.test_count", "test dialogue has " + std::to_string(n) + " test samples, expected 1");
    }
  }
  return report;
}

}  // namespace forge
