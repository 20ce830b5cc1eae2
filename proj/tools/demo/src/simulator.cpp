#include "forge/demo/simulator.hpp"

#include <algorithm>
#include <array>
#include <regex>

#include "forge/domain/types.hpp"
#include "forge/eval/metric.hpp"
#include "forge/util/error.hpp"
#include "forge/util/rng.hpp"
#include "forge/util/text.hpp"

namespace forge::demo {

namespace {

using Parts = std::vector<std::string>;

Parts split_tag(const std::string& tag) {
  Parts parts;
  std::size_t start = 0;
  while (true) {
    const auto slash = tag.find('/', start);
    parts.push_back(tag.substr(start, slash - start));
    if (slash == std::string::npos) break;
    start = slash + 1;
  }
  return parts;
}

template <std::size_t N>
const char* pick(KeyedRng& rng, const std::array<const char*, N>& pool) {
  return pool[rng.below(N)];
}

std::string user_text(const backend::ChatRequest& r) { return r.messages.empty() ? "" : r.messages.back().text; }

std::string capture(const std::string& text, const std::regex& re, std::size_t group = 1, std::string fallback = "") {
  std::smatch m;
  return std::regex_search(text, m, re) ? m[group].str() : fallback;
}

constexpr std::array<const char*, 12> kFirst = {"Alma", "Bruno", "Chiara", "Dev",   "Efua",  "Farid",
                                                "Greta", "Hiro", "Ines",   "Jonah", "Kemal", "Lucia"};
constexpr std::array<const char*, 8> kLast = {"Okafor", "Lindqvist", "Moreau", "Tanaka",
                                              "Quispe", "Novak",     "Hale",   "Ibarra"};
constexpr std::array<const char*, 8> kJobs = {"night-shift nurse",  "bicycle courier",     "retired ferry pilot",
                                              "school librarian",   "apprentice locksmith", "street food cook",
                                              "radio repair owner", "orchard hand"};
constexpr std::array<const char*, 6> kTraits = {"patient and dry-humoured", "restless and generous",
                                                "cautious but warm",        "blunt and loyal",
                                                "dreamy and observant",     "proud and quick to laugh"};
constexpr std::array<const char*, 8> kObservations = {
    "the light falls across it as if someone planned the whole afternoon",
    "everyone in it seems to be waiting for something only they can hear",
    "there is a story in the corner that nobody bothered to frame properly",
    "it reminds me how crowded a quiet place can feel",
    "the colours are honest, which is more than I can say for most people",
    "I would walk straight into it if the frame let me",
    "it smells of rain and old rope, even from here",
    "whoever stood there last left in a hurry"};
constexpr std::array<const char*, 8> kQuestions = {
    "What catches your eye first?", "Have you been somewhere like this?", "Who do you think lives there?",
    "Would you change anything about it?", "Does it remind you of home?", "What would you do there all day?",
    "Is it a happy picture to you?", "What happened just before this moment?"};
constexpr std::array<const char*, 6> kReplies = {
    "Honestly, I keep coming back to the edges, that is where the truth usually hides.",
    "I have stood in places like this and never once regretted staying late.",
    "It makes me think of the people I left behind, and that is not a bad feeling.",
    "I would sit right there and listen until the whole scene gave up its secrets.",
    "There is a lesson in it about patience, though I learned it the hard way.",
    "Give me an hour there and I would know every name in the street."};

std::string sentence_case(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string profile_text(const std::string& name, KeyedRng& rng, bool with_preamble) {
  const std::string trait = pick(rng, kTraits);
  const std::string job = pick(rng, kJobs);
  std::string out;
  if (with_preamble) out += "Here is the profile you asked for.\n\n";
  out += "Brief Introduction:\n" + name + " is a " + job + " known around the neighbourhood for being " + trait + ".\n";
  out += "Personality:\n" + sentence_case(trait) + "; " + name +
         " notices small details, keeps promises and distrusts anything that sounds too polished.\n";
  out += "Life Story:\nGrowing up above a shop that never closed, " + name +
         " learned early to read people by the way they paid. Years of odd jobs ended in the work " + name +
         " does now, which suits a habit of staying up late and asking questions.\n";
  out += "Main Interpersonal Relationships:\nA sister who calls every Sunday, an old mentor who still disapproves, "
         "and a neighbour who borrows tools and returns them improved.\n";
  out += "Catchphrases:\n- \"Slow is smooth, smooth is fast.\"\n- \"Ask twice, answer once.\"\n";
  return out;
}

std::string writer_meta(const Parts& parts, KeyedRng& rng) {
  const auto count = static_cast<std::size_t>(std::stoul(parts.at(1)));
  const auto first0 = rng.below(kFirst.size());
  const auto last0 = rng.below(kLast.size());
  std::string out = "Here are the people:\n\n";
  for (std::size_t i = 0; i < count; ++i) {
    const std::string name = std::string(kFirst[(first0 + i * 5) % kFirst.size()]) + " " +
                             kLast[(last0 + i * 3) % kLast.size()];
    out += std::to_string(i + 1) + ". Name: " + name + "\n";
    out += "Gender: " + std::string(i % 2 == 0 ? "female" : "male") + "\n";
    out += "Personality: " + sentence_case(pick(rng, kTraits)) + ".\n";
    out += "Background: Works as a " + std::string(pick(rng, kJobs)) + " in a mid-sized coastal town.\n\n";
  }
  return out;
}

std::string writer_dialogue(const backend::ChatRequest& req, const Parts& parts, KeyedRng& rng) {
  const auto scenario = parse_scenario(parts.at(1));
  const std::string body = user_text(req);
  static const std::regex kLabels(R"re(Begin every line with "([^"]+):" or "([^"]+):")re");
  static const std::regex kPairs(R"((\d+) exchanges)");
  std::smatch m;
  const bool labelled = std::regex_search(body, m, kLabels);
  const std::string x = labelled ? m[1].str() : "Human";
  const std::string y = labelled ? m[2].str() : "Character";
  const int pairs = std::stoi(capture(body, kPairs, 1, "3"));

  const auto artifact = rng.below(20);
  auto decorate = [&](std::string line, bool first_character_turn) -> std::string {
    if (!first_character_turn) return line;
    if (artifact == 0) return "*glances at the picture* " + line;
    if (artifact == 1) return "As an AI, I can only describe what the image shows.";
    if (artifact == 2) return line + " I hope this response helps.";
    return line;
  };

  if (scenario == Scenario::Commentary) {
    std::string line = "Look at that: " + std::string(pick(rng, kObservations)) + ". " + pick(rng, kReplies);
    return decorate(line, true);
  }
  std::string out;
  bool first_character = true;
  if (scenario == Scenario::HumanRole) {
    for (int i = 0; i < pairs; ++i) {
      out += x + ": " + pick(rng, kQuestions) + "\n";
      std::string reply = sentence_case(pick(rng, kObservations)) + ". " + pick(rng, kReplies);
      out += y + ": " + decorate(reply, first_character) + "\n";
      first_character = false;
    }
    return out;
  }
  const bool x_first = rng.below(2) == 0;
  for (int i = 0; i < pairs * 2; ++i) {
    const bool speaks_x = (i % 2 == 0) == x_first;
    std::string line = i % 2 == 0 ? sentence_case(pick(rng, kObservations)) + ". " + pick(rng, kQuestions)
                                  : std::string(pick(rng, kReplies));
    if (speaks_x) line = decorate(line, first_character), first_character = false;
    out += (speaks_x ? x : y) + ": " + line + "\n";
  }
  return out;
}

std::string writer_reply(const backend::ChatRequest& req, const Parts& parts, KeyedRng& rng) {
  const auto& kind = parts.at(0);
  if (kind == "gen.meta") return writer_meta(parts, rng);
  if (kind == "gen.expand") return profile_text(parts.at(1), rng, false);
  if (kind == "gen.summary") return profile_text(parts.at(1), rng, true);
  if (kind == "gen.summary.merge") return profile_text(parts.at(1), rng, false);
  if (kind == "gen.summary.chunk") {
    return "Notes on part " + std::to_string(std::stoi(parts.at(2)) + 1) + ": " + parts.at(1) +
           " keeps careful accounts, speaks plainly and trusts a small circle of old friends.";
  }
  if (kind == "gen.simplify") {
    const auto max_chars = static_cast<std::size_t>(std::stoul(parts.at(3)));
    const auto body = user_text(req);
    const auto start = body.find("\n\n");
    const std::string profile = start == std::string::npos ? body : body.substr(start + 2);
    std::string flat = text::tidy_spacing(profile);
    std::replace(flat.begin(), flat.end(), '\n', ' ');
    return std::string(text::prefix_chars(flat, max_chars * 3 / 5));
  }
  if (kind == "gen.dialogue") return writer_dialogue(req, parts, rng);
  throw Error(Errc::InvalidArgument, "simulated writer cannot answer tag " + req.request_tag);
}

std::string agent_reply(const backend::ChatRequest& req, const Parts& parts, KeyedRng& rng) {
  static const std::regex kRole(R"(shoes of (.+?) from )");
  const std::string name = capture(req.system + "\n" + user_text(req), kRole, 1, "I");
  const double quality = agent_quality(parts.at(1));
  std::string out = sentence_case(pick(rng, kObservations)) + ".";
  if (quality > 0.5) out += std::string(" ") + pick(rng, kReplies);
  if (quality > 0.8) out += " That is how " + name + " sees it, and I have not been wrong about a place yet.";
  return out;
}

struct JudgeScores {
  int evaluated;
  int reference;
};

JudgeScores judge_scores(const std::string& judge, const std::string& sample, const std::string& agent,
                         eval::Metric metric, int noise) {
  const std::string m(eval::to_string(metric));
  KeyedRng truth(0, "truth/" + sample + "/" + agent + "/" + m);
  const int reference = 7 + static_cast<int>(truth.below(3));
  const double quality = agent_quality(agent);
  int evaluated = reference - static_cast<int>((1.0 - quality) * 4.0 + 0.5) + static_cast<int>(truth.below(3)) - 1;
  if (noise > 0) {
    KeyedRng jitter(0, "jitter/" + judge + "/" + sample + "/" + agent + "/" + m);
    evaluated += static_cast<int>(jitter.below(static_cast<std::uint64_t>(2 * noise + 1))) - noise;
  }
  return {std::clamp(evaluated, 1, 10), reference};
}

std::string commentary(const JudgeScores& s, KeyedRng& rng) {
  static constexpr std::array<const char*, 3> kBetter = {
      "The response goes a little further than the reference", "The answer is sharper than the reference",
      "The response adds welcome detail beyond the reference"};
  static constexpr std::array<const char*, 3> kEven = {"The response is about as good as the reference",
                                                       "Both answers handle this equally well",
                                                       "The response matches the reference closely"};
  static constexpr std::array<const char*, 3> kWorse = {"The response is flatter than the reference",
                                                        "The answer misses things the reference gets right",
                                                        "The response drifts where the reference stays focused"};
  if (s.evaluated > s.reference) return pick(rng, kBetter);
  if (s.evaluated == s.reference) return pick(rng, kEven);
  return pick(rng, kWorse);
}

std::string judge_reply(const Parts& parts, const std::string& digest, const SimulatedBackend::Options& o) {
  const auto& judge = parts.at(1);
  const auto& sample = parts.at(2);
  const auto& agent = parts.at(3);
  std::vector<eval::Metric> metrics(eval::kAllMetrics.begin(), eval::kAllMetrics.end());
  if (parts.size() > 4) metrics = {eval::parse_metric(parts.at(4))};

  KeyedRng style(0, "style/" + digest);
  const double roll = style.unit();
  const bool broken = roll < o.sloppiness / 2.0;
  const bool loose = !broken && roll < o.sloppiness;
  if (broken) {
    return metrics.size() == 1 ? "I would rather not put a number on this one."
                               : "IA: Reasonable. Scores: 7 8\nFlu: Fine overall.\nThe remaining criteria are hard to judge.";
  }
  std::string out;
  for (const auto m : metrics) {
    const auto s = judge_scores(judge, sample, agent, m, o.noise);
    KeyedRng words(0, "words/" + digest + "/" + std::string(eval::to_string(m)));
    const auto note = commentary(s, words);
    if (loose) {
      out += "**" + std::string(eval::full_name(m)) + "**: " + note + ". Score pair: " + std::to_string(s.evaluated) +
             ", " + std::to_string(s.reference) + "\n";
    } else {
      out += std::string(eval::to_string(m)) + ": " + note + ". Scores: " + std::to_string(s.evaluated) + " " +
             std::to_string(s.reference) + "\n";
    }
  }
  return out;
}

}  // namespace

double agent_quality(const std::string& agent) {
  if (agent.find("alpha") != std::string::npos) return 0.95;
  if (agent.find("gamma") != std::string::npos) return 0.35;
  return 0.7;
}

SimulatedBackend::SimulatedBackend(Options options) : options_(std::move(options)) {}

backend::AttemptResult SimulatedBackend::send(const backend::ChatRequest& request, const std::string& digest) {
  const auto parts = split_tag(request.request_tag);
  KeyedRng rng(0, digest);
  backend::AttemptResult result;
  result.outcome = backend::Outcome::Ok;
  if (parts.at(0) == "agent") {
    result.text = agent_reply(request, parts, rng);
  } else if (parts.at(0) == "judge") {
    result.text = judge_reply(parts, digest, options_);
  } else {
    result.text = writer_reply(request, parts, rng);
  }
  return result;
}

void register_simulator(backend::BackendRegistry& registry) {
  registry.register_kind("simulated", [](const backend::json& block, const backend::FactoryContext&) {
    SimulatedBackend::Options o;
    o.sloppiness = block.value("sloppiness", 0.0);
    o.noise = block.value("noise", 0);
    return std::make_shared<SimulatedBackend>(o);
  });
}

}  // namespace forge::demo
