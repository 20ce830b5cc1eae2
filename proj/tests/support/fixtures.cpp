#include "fixtures.hpp"

#include <unistd.h>

#include "forge/domain/ids.hpp"
#include "forge/eval/metric.hpp"
#include "forge/util/hash.hpp"
#include "forge/util/jsonl.hpp"

namespace forge::testkit {

Profile profile_for(const std::string& name) {
  Profile p;
  p.brief_introduction = name + " keeps the ledger at a river crossing.";
  p.personality = "Patient, dry, and hard to surprise.";
  p.life_story = name + " grew up on barges and learned to read from shipping manifests.";
  p.relationships = "An older brother who runs the ferry; a rival toll-keeper upstream.";
  p.catchphrases = {"Count twice, cross once."};
  return p;
}

Character make_character(const std::string& name, const std::string& series, Split split, Language language) {
  Character c;
  c.name = name;
  c.series = series;
  c.split = split;
  c.language = language;
  c.profile = profile_for(name);
  return with_id(c);
}

ImageRecord generic_image(const std::string& uri) {
  ImageRecord img;
  img.uri = uri;
  return with_id(img);
}

ImageRecord related_image(const std::string& uri, const Character& owner) {
  ImageRecord img;
  img.uri = uri;
  img.kind = ImageKind::CharacterRelated;
  img.annotation = ImageAnnotation{{owner.name}, "harbour", "unloading crates at dusk"};
  img.owner_character = owner.id;
  return with_id(img);
}

Dialogue commentary(const Character& role, const ImageRecord& image, const std::string& text, Split split) {
  Dialogue d;
  d.scenario = Scenario::Commentary;
  d.image = image.id;
  d.speaker_b = role.id;
  d.language = role.language;
  d.split = split;
  d.turns = {Turn{Speaker::character(role.id), text, 0}};
  return with_id(d);
}

Dialogue human_role(const Character& role, const ImageRecord& image, int turns, Split split) {
  Dialogue d;
  d.scenario = Scenario::HumanRole;
  d.image = image.id;
  d.speaker_b = role.id;
  d.language = role.language;
  d.split = split;
  for (int i = 0; i < turns; ++i) {
    const bool human = i % 2 == 0;
    d.turns.push_back(Turn{human ? Speaker::human() : Speaker::character(role.id),
                           (human ? "question " : "answer ") + std::to_string(i), i});
  }
  return with_id(d);
}

Dialogue inter_role(const Character& role, const Character& partner, const ImageRecord& image, int turns,
                    bool role_opens, Split split) {
  Dialogue d;
  d.scenario = Scenario::InterRole;
  d.image = image.id;
  d.speaker_a = Speaker::character(partner.id);
  d.speaker_b = role.id;
  d.language = role.language;
  d.split = split;
  for (int i = 0; i < turns; ++i) {
    const bool role_turn = (i % 2 == 0) == role_opens;
    d.turns.push_back(Turn{Speaker::character(role_turn ? role.id : partner.id),
                           (role_turn ? "role line " : "partner line ") + std::to_string(i), i});
  }
  return with_id(d);
}

Dialogue random_dialogue(KeyedRng& rng, const Corpus& corpus, int index) {
  const auto& chars = corpus.characters();
  const auto& role = chars[rng.below(chars.size())];
  const auto& image = corpus.images()[rng.below(corpus.images().size())];
  switch (rng.below(3)) {
    case 0: return commentary(role, image, "comment " + std::to_string(index));
    case 1: return human_role(role, image, 2 + static_cast<int>(rng.below(9)));
    default: {
      const Character* partner = nullptr;
      for (const auto& c : chars) {
        if (c.id != role.id && c.series == role.series) partner = &c;
      }
      return inter_role(role, *partner, image, 2 + static_cast<int>(rng.below(9)), rng.below(2) == 0);
    }
  }
}

std::string fuzz_utterance(KeyedRng& rng) {
  static const std::vector<std::string> kClean = {
      "The tide is turning early tonight.",  "Keep your hands off the ledger.",
      "Those crates came in from the south.", "I counted every coin twice.",
      "You look like you have walked a long way.", "Rope frays faster in salt air.",
      "Nobody crosses without paying the toll.", "My brother would laugh at that hat."};
  static const std::vector<std::string> kPrefix = {
      "Sure, here is my response: ", "Here's my reply for the scene: ", "Response: ", "Hmm, ", "Oh! ",
      "Ah... ", "Well, ", "*nods slowly* ", "[laughs] ", "(sighs) ", "Certainly! Here is the dialogue: "};
  static const std::vector<std::string> kInline = {" *taps the table* ", " [pauses] ", " *glances at the river* "};
  static const std::vector<std::string> kSuffix = {" I hope this helps.", " Let me know if you need more.",
                                                   " (smiles)", " *walks away*", " [end]"};
  static const std::vector<std::string> kPoison = {"As an AI, I cannot see the harbour.", "[no response]",
                                                   "\xE4\xBB\x8A\xE5\xA4\xA9\xE7\x9A\x84\xE6\xB2\xB3"
                                                   "\xE6\xB0\xB4\xE5\xBE\x88\xE5\x86\xB7",
                                                   "*stares silently*"};
  if (rng.below(12) == 0) return kPoison[rng.below(kPoison.size())];
  std::string out;
  const auto prefixes = rng.below(3);
  for (std::uint64_t i = 0; i < prefixes; ++i) out += kPrefix[rng.below(kPrefix.size())];
  out += kClean[rng.below(kClean.size())];
  if (rng.below(3) == 0) out += kInline[rng.below(kInline.size())] + kClean[rng.below(kClean.size())];
  if (rng.below(3) == 0) out += kSuffix[rng.below(kSuffix.size())];
  return out;
}

Dialogue fuzz_dialogue(KeyedRng& rng, const Corpus& corpus, int index) {
  auto d = random_dialogue(rng, corpus, index);
  for (auto& t : d.turns) t.text = fuzz_utterance(rng);
  return with_id(d);
}

Corpus small_corpus() {
  std::vector<Character> chars = {make_character("Tomas Brandt"), make_character("Nell Ashdown"),
                                  make_character("Oren Pike", "Lanterns of Quillhaven"),
                                  make_character("Sable Mirren", "Lanterns of Quillhaven")};
  std::vector<ImageRecord> images = {generic_image("img/market.jpg"), generic_image("img/pier.jpg"),
                                     generic_image("img/orchard.jpg")};
  return Corpus(std::move(chars), std::move(images), {});
}

std::vector<eval::MetricAssessment> assessments(const std::vector<eval::ScorePair>& pairs) {
  std::vector<eval::MetricAssessment> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto m = eval::kAllMetrics[i];
    out.push_back({m, "The reply handles " + std::string(eval::full_name(m)) + " adequately.", pairs[i]});
  }
  return out;
}

std::string strict_judge_text(const std::vector<eval::ScorePair>& pairs) {
  std::string out;
  for (const auto& a : assessments(pairs)) out += eval::format_assessment(a) + "\n";
  return out;
}

std::string lenient_judge_text(const std::vector<eval::ScorePair>& pairs) {
  std::string out = "Here is my assessment of Response 1 against the reference.\n\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto m = eval::kAllMetrics[i];
    out += std::to_string(i + 1) + ". **" + std::string(eval::full_name(m)) + "**: the reply is solid on this point.\n";
    out += "   Score pair: " + std::to_string(pairs[i].evaluated) + "/10, " + std::to_string(pairs[i].reference) +
           "/10\n";
  }
  return out;
}

std::vector<eval::ScorePair> random_pairs(KeyedRng& rng) {
  std::vector<eval::ScorePair> pairs;
  for (std::size_t i = 0; i < eval::kAllMetrics.size(); ++i) {
    pairs.push_back({1 + static_cast<int>(rng.below(10)), 1 + static_cast<int>(rng.below(10))});
  }
  return pairs;
}

std::vector<eval::EvaluationTrajectory> synthetic_trajectories(std::size_t agents, std::size_t samples,
                                                               const std::string& judge, std::uint64_t seed) {
  std::vector<eval::EvaluationTrajectory> out;
  out.reserve(agents * samples);
  for (std::size_t a = 0; a < agents; ++a) {
    for (std::size_t s = 0; s < samples; ++s) {
      KeyedRng rng(seed, "traj/" + std::to_string(a) + "/" + std::to_string(s));
      out.push_back(eval::make_trajectory("q" + std::to_string(s), "agent-" + std::to_string(a), judge,
                                          "reply " + std::to_string(s), strict_judge_text(random_pairs(rng))));
    }
  }
  return out;
}

backend::AttemptResult FnBackend::send(const backend::ChatRequest& request, const std::string&) {
  ++calls;
  backend::AttemptResult r;
  r.outcome = backend::Outcome::Ok;
  r.text = reply_(request);
  return r;
}

std::unique_ptr<backend::BackendHandle> make_handle(std::shared_ptr<backend::ChatBackend> b, int attempts,
                                                    const std::string& name) {
  backend::RetryPolicy retry;
  retry.max_attempts = attempts;
  retry.sleep = [](std::chrono::milliseconds) {};
  return std::make_unique<backend::BackendHandle>(name, std::move(b), retry);
}

std::map<std::string, std::string> tree_digest(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), dir).generic_string();
    if (entry.path().filename() == "manifest.json") {
      auto m = read_json(entry.path());
      m.erase("started_at");
      m.erase("finished_at");
      for (auto& s : m["stages"]) s.erase("completed_at");
      out[rel] = sha256_hex(m.dump());
    } else {
      out[rel] = sha256_hex(read_text(entry.path()));
    }
  }
  return out;
}

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("forge-test-" + std::to_string(::getpid()) + "-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace forge::testkit
