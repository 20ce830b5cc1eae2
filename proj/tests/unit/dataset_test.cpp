#include <gtest/gtest.h>

#include <map>

#include "fixtures.hpp"
#include "forge/dataset/conversion.hpp"
#include "forge/dataset/dialogue_gen.hpp"
#include "forge/dataset/filter.hpp"
#include "forge/dataset/profiles.hpp"
#include "forge/dataset/prompts.hpp"
#include "forge/dataset/stats.hpp"
#include "forge/domain/context.hpp"
#include "forge/domain/ids.hpp"
#include "forge/domain/validation.hpp"
#include "forge/eval/templates.hpp"
#include "forge/util/text.hpp"

using namespace forge;
using namespace forge::dataset;
using testkit::FnBackend;
using testkit::make_character;

namespace {

const std::string kProfileReply =
    "Brief Introduction:\nIlse Varga runs the night ferry.\n"
    "Personality:\nBlunt and loyal.\n"
    "Life Story:\nBorn on the east bank, she took over the ferry at sixteen.\n"
    "Main Interpersonal Relationships:\nHer uncle, who taught her to read the current.\n"
    "Catchphrases:\n- \"Mind the gap, mind the river.\"\n";

std::string meta_reply(int n, bool drop_gender = false) {
  std::string out;
  for (int i = 1; i <= n; ++i) {
    out += std::to_string(i) + ". Name: Person " + std::to_string(i) + "\n";
    if (!(drop_gender && i == 2)) out += "Gender: female\n";
    out += "Personality: calm\nBackground: a lighthouse keeper\n";
  }
  return out;
}

}  // namespace

TEST(Profiles, MetaBatchParsesRequestedCount) {
  auto b = std::make_shared<FnBackend>([](const backend::ChatRequest&) { return meta_reply(5); });
  auto h = testkit::make_handle(b);
  const auto metas = generate_meta_batch(5, *h, GenerationPrompts::defaults());
  ASSERT_EQ(metas.size(), 5u);
  EXPECT_EQ(metas[4].name, "Person 5");
  EXPECT_EQ(metas[0].background_brief, "a lighthouse keeper");
}

TEST(Profiles, MetaBatchCardinalityAndMissingField) {
  EXPECT_ERRC(parse_meta_list(meta_reply(4), 5), Errc::ParseError);
  try {
    parse_meta_list(meta_reply(3, true), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("entry 2"), std::string::npos) << e.what();
  }
}

TEST(Profiles, ExpandFiveSections) {
  auto b = std::make_shared<FnBackend>([](const backend::ChatRequest&) { return kProfileReply; });
  auto h = testkit::make_handle(b);
  const auto p = expand_profile(MetaInfo{"Ilse Varga", "female", "blunt", "ferry"}, *h, GenerationPrompts::defaults());
  EXPECT_EQ(p.brief_introduction, "Ilse Varga runs the night ferry.");
  EXPECT_EQ(p.catchphrases, std::vector<std::string>{"Mind the gap, mind the river."});
  EXPECT_TRUE(validate_profile(p, "x").ok());
}

TEST(Profiles, MissingCatchphrasesSection) {
  const auto cut = kProfileReply.substr(0, kProfileReply.find("Catchphrases"));
  EXPECT_ERRC(parse_profile_sections(cut), Errc::ParseError);
}

TEST(Profiles, PreambleIsStripped) {
  const auto with_preamble = "Of course! Below is the profile you asked for.\n\n" + kProfileReply;
  EXPECT_EQ(parse_profile_sections(with_preamble), parse_profile_sections(kProfileReply));
}

TEST(Profiles, SummaryEmptySourceIsPrecondition) {
  auto h = testkit::make_handle(std::make_shared<FnBackend>([](const backend::ChatRequest&) { return kProfileReply; }));
  EXPECT_ERRC(summarize_profile("  ", "Ilse", "River", *h, GenerationPrompts::defaults()), Errc::PreconditionFailed);
}

TEST(Profiles, SummarySingleCall) {
  auto b = std::make_shared<FnBackend>([](const backend::ChatRequest&) { return kProfileReply; });
  auto h = testkit::make_handle(b);
  const auto p = summarize_profile("A short page about Ilse.", "Ilse Varga", "River", *h, GenerationPrompts::defaults());
  EXPECT_EQ(b->calls, 1);
  EXPECT_FALSE(p.life_story.empty());
}

TEST(Profiles, OversizedSourceIsChunkedThenMerged) {
  std::vector<std::string> tags;
  auto b = std::make_shared<FnBackend>([&](const backend::ChatRequest& r) {
    tags.push_back(r.request_tag);
    return r.request_tag.rfind("gen.summary.chunk", 0) == 0 ? std::string("notes on this part") : kProfileReply;
  });
  auto h = testkit::make_handle(b);
  std::string source;
  for (int i = 0; i < 40; ++i) source += "Paragraph " + std::to_string(i) + " about the ferry and the river.\n";
  const auto chunks = chunk_text(source, 300);
  for (const auto& c : chunks) EXPECT_LE(text::char_count(c), 300u);
  const auto p = summarize_profile(source, "Ilse Varga", "River", *h, GenerationPrompts::defaults(), 300);
  ASSERT_EQ(tags.size(), chunks.size() + 1);
  EXPECT_EQ(tags.back().rfind("gen.summary.merge", 0), 0u);
  EXPECT_TRUE(validate_profile(p, "x").ok());
}

TEST(Profiles, SimplifyShortRewriteStored) {
  auto h = testkit::make_handle(std::make_shared<FnBackend>([](const backend::ChatRequest&) { return "Short."; }));
  const auto p = simplify_profile(testkit::profile_for("Ilse"), 50, *h, GenerationPrompts::defaults());
  EXPECT_EQ(p.simplified, "Short.");
}

TEST(Profiles, SimplifyTooLongTwiceIsLengthNotMet) {
  auto b = std::make_shared<FnBackend>([](const backend::ChatRequest&) { return std::string(200, 'x'); });
  auto h = testkit::make_handle(b);
  EXPECT_ERRC(simplify_profile(testkit::profile_for("Ilse"), 50, *h, GenerationPrompts::defaults(), 2),
              Errc::LengthNotMet);
  EXPECT_EQ(b->calls, 2);
}

TEST(Profiles, SimplifyAlreadyShortCopiesWithoutCall) {
  auto b = std::make_shared<FnBackend>([](const backend::ChatRequest&) { return "unused"; });
  auto h = testkit::make_handle(b);
  const auto profile = testkit::profile_for("Ilse");
  const auto p = simplify_profile(profile, 100000, *h, GenerationPrompts::defaults());
  EXPECT_EQ(b->calls, 0);
  EXPECT_EQ(p.simplified, render_profile(profile));
}

class DialogueGen : public ::testing::Test {
 protected:
  Character tomas = make_character("Tomas Brandt");
  Character nell = make_character("Nell Ashdown");
  ImageRecord image = testkit::generic_image("img/pier.jpg");
};

TEST_F(DialogueGen, CommentaryOneUtterance) {
  DialogueRequest r{Scenario::Commentary, &tomas, nullptr, &image};
  const auto d = parse_dialogue_reply(r, "Tomas Brandt: That pier has seen better decades.");
  ASSERT_EQ(d.turns.size(), 1u);
  EXPECT_EQ(d.turns[0].text, "That pier has seen better decades.");
  EXPECT_TRUE(validate_dialogue(d).ok());
}

TEST_F(DialogueGen, HumanRoleSixTurns) {
  DialogueRequest r{Scenario::HumanRole, &tomas, nullptr, &image};
  std::string reply;
  for (int i = 0; i < 3; ++i) reply += "Human: question " + std::to_string(i) + "\nTomas Brandt: answer\n";
  const auto d = parse_dialogue_reply(r, reply);
  ASSERT_EQ(d.turns.size(), 6u);
  EXPECT_TRUE(d.turns[0].speaker.is_human());
  EXPECT_TRUE(validate_dialogue(d).ok());
}

TEST_F(DialogueGen, ConsecutiveCharacterTurnsIsStructureError) {
  DialogueRequest r{Scenario::HumanRole, &tomas, nullptr, &image};
  EXPECT_ERRC(parse_dialogue_reply(r, "Human: hi\nTomas Brandt: hello\nTomas Brandt: again\n"), Errc::StructureError);
}

TEST_F(DialogueGen, InterRoleEitherOpens) {
  DialogueRequest r{Scenario::InterRole, &tomas, &nell, &image};
  const auto d = parse_dialogue_reply(r, "Tomas Brandt: Look.\nNell Ashdown: I see it.\nTomas Brandt: Good.\n");
  EXPECT_EQ(d.turns.size(), 3u);
  EXPECT_EQ(d.turns[0].speaker.character_id(), tomas.id);
  EXPECT_TRUE(validate_dialogue(d).ok());
}

TEST_F(DialogueGen, RequestPreconditions) {
  const auto stranger = make_character("Oren Pike", "Lanterns of Quillhaven");
  DialogueRequest cross{Scenario::InterRole, &tomas, &stranger, &image};
  EXPECT_ERRC(check_dialogue_request(cross), Errc::PreconditionFailed);
  const auto owned = testkit::related_image("img/maps.jpg", nell);
  DialogueRequest foreign{Scenario::Commentary, &tomas, nullptr, &owned};
  EXPECT_ERRC(check_dialogue_request(foreign), Errc::PreconditionFailed);
}

TEST_F(DialogueGen, GenerateCallsBackendWithImage) {
  std::optional<std::string> seen_image;
  auto b = std::make_shared<FnBackend>([&](const backend::ChatRequest& req) {
    seen_image = req.messages.front().image_uri;
    return std::string("Tomas Brandt: Fine planks.");
  });
  auto h = testkit::make_handle(b);
  DialogueRequest r{Scenario::Commentary, &tomas, nullptr, &image};
  const auto d = generate_dialogue(r, *h, GenerationPrompts::defaults());
  EXPECT_EQ(seen_image, image.uri);
  EXPECT_EQ(d.turns.size(), 1u);
}

// ---------------------------------------------------------------- filter

namespace {

Dialogue one_line(const std::string& text, Language lang = Language::En) {
  const auto c = make_character("Tony", "Iron Works", Split::Train, lang);
  return testkit::commentary(c, testkit::generic_image("img/lab.jpg"), text);
}

}  // namespace

TEST(Filter, AssistantToneDrops) {
  const auto o = filter_dialogue(one_line("As an AI language model, I think the suit is red."));
  EXPECT_EQ(o.verdict, Verdict::Drop);
  EXPECT_EQ(o.reasons, std::vector<std::string>{std::string(kRuleAssistantTone)});
}

TEST(Filter, StageDirectionRepaired) {
  const auto o = filter_dialogue(one_line("*smiles warmly* JARVIS, run diagnostics."));
  ASSERT_EQ(o.verdict, Verdict::Repair);
  EXPECT_EQ(o.repaired_dialogue->turns[0].text, "JARVIS, run diagnostics.");
  EXPECT_EQ(o.reasons, std::vector<std::string>{std::string(kRuleStageDirection)});
}

TEST(Filter, CleanKeeps) {
  const auto o = filter_dialogue(one_line("JARVIS, run diagnostics."));
  EXPECT_EQ(o.verdict, Verdict::Keep);
  EXPECT_TRUE(o.reasons.empty());
}

TEST(Filter, EachRuleFires) {
  EXPECT_EQ(filter_dialogue(one_line("[no response]")).reasons.front(), kRuleFailedResponse);
  EXPECT_EQ(filter_dialogue(one_line("\xE4\xBB\x8A\xE5\xA4\xA9\xE6\xB2\xB3\xE6\xB0\xB4\xE5\xBE\x88\xE5\x86\xB7")).reasons.front(),
            kRuleLanguage);
  const auto wrapped = filter_dialogue(one_line("Here is my response: The suit is ready."));
  EXPECT_EQ(wrapped.reasons.front(), kRuleExplanatoryWrapper);
  EXPECT_EQ(wrapped.repaired_dialogue->turns[0].text, "The suit is ready.");
  const auto suffix = filter_dialogue(one_line("The suit is ready. I hope this helps!"));
  EXPECT_EQ(suffix.repaired_dialogue->turns[0].text, "The suit is ready.");
  const auto filler = filter_dialogue(one_line("Hmm, the suit is ready."));
  EXPECT_EQ(filler.reasons.front(), kRuleModalFiller);
  EXPECT_EQ(filler.repaired_dialogue->turns[0].text, "The suit is ready.");
}

TEST(Filter, ChineseDialogueKeepsChinese) {
  const auto o = filter_dialogue(one_line("\xE4\xBB\x8A\xE5\xA4\xA9\xE6\xB2\xB3\xE6\xB0\xB4\xE5\xBE\x88\xE5\x86\xB7", Language::Zh));
  EXPECT_EQ(o.verdict, Verdict::Keep);
}

TEST(Filter, WordBoundaryOnPhrases) {
  EXPECT_EQ(filter_dialogue(one_line("She works as an aide to the mayor.")).verdict, Verdict::Keep);
}

TEST(Filter, RepairThatEmptiesTurnDrops) {
  EXPECT_EQ(filter_dialogue(one_line("*stares silently*")).verdict, Verdict::Drop);
}

TEST(Filter, StructureViolationDrops) {
  auto d = one_line("Fine.");
  d.turns.push_back(Turn{Speaker::human(), "extra", 1});
  d = with_id(d);
  EXPECT_EQ(filter_dialogue(d).reasons, std::vector<std::string>{std::string(kRuleStructure)});
}

TEST(Filter, IdempotentOnFuzzedDialogues) {
  const DialogueFilter filter;
  const auto corpus = testkit::small_corpus();
  KeyedRng rng(11, "fuzz");
  int repaired = 0;
  for (int i = 0; i < 300; ++i) {
    const auto d = testkit::fuzz_dialogue(rng, corpus, i);
    const auto once = filter.filter(d);
    if (once.verdict == Verdict::Drop) continue;
    const Dialogue& out = once.verdict == Verdict::Repair ? *once.repaired_dialogue : d;
    repaired += once.verdict == Verdict::Repair;
    const auto twice = filter.filter(out);
    ASSERT_EQ(twice.verdict, Verdict::Keep) << to_json(out).dump();
    EXPECT_TRUE(twice.findings.empty());
  }
  EXPECT_GT(repaired, 50);
}

TEST(Filter, ConfigOverridesAndBadPattern) {
  auto cfg = FilterConfig::from_json(json{{"assistant_phrases", {"beep boop"}}});
  EXPECT_EQ(filter_dialogue(one_line("Beep boop, the suit is ready."), cfg).verdict, Verdict::Drop);
  EXPECT_EQ(filter_dialogue(one_line("As an AI, whatever."), cfg).verdict, Verdict::Keep);
  cfg.stage_patterns = {"(unclosed"};
  EXPECT_ERRC(DialogueFilter{cfg}, Errc::ConfigError);
}

// ------------------------------------------------------------ conversion

class Conversion : public ::testing::Test {
 protected:
  Character tomas = make_character("Tomas Brandt");
  Character nell = make_character("Nell Ashdown");
  ImageRecord image = testkit::generic_image("img/pier.jpg");
  Corpus corpus{{tomas, nell}, {image}, {}};
  eval::AgentTemplates templates = eval::AgentTemplates::original();
};

TEST_F(Conversion, HumanRolePrefixes) {
  const auto d = testkit::human_role(tomas, image, 6);
  const Corpus c({tomas, nell}, {image}, {d});
  const auto samples = to_training_samples(d, tomas.id, c, templates);
  ASSERT_EQ(samples.size(), 3u);
  std::vector<std::size_t> lengths;
  for (const auto& s : samples) lengths.push_back(s.context.size());
  EXPECT_EQ(lengths, (std::vector<std::size_t>{1, 3, 5}));
  EXPECT_EQ(samples[2].target, d.turns[5].text);
  EXPECT_NE(samples[0].prompt.find("Tomas Brandt"), std::string::npos);
}

TEST_F(Conversion, CommentarySingleSample) {
  const auto d = testkit::commentary(tomas, image, "Old boards.");
  const Corpus c({tomas, nell}, {image}, {d});
  const auto samples = to_training_samples(d, tomas.id, c, templates);
  ASSERT_EQ(samples.size(), 1u);
  EXPECT_TRUE(samples[0].context.empty());
}

TEST_F(Conversion, RoleAbsentAndSplitPreconditions) {
  const auto stranger = make_character("Ada Quill");
  const auto d = testkit::inter_role(tomas, nell, image, 4, true);
  EXPECT_ERRC(to_training_samples(d, stranger.id, corpus, templates), Errc::RoleAbsent);
  EXPECT_ERRC(to_test_sample(d, tomas.id, 1, corpus, templates), Errc::PreconditionFailed);
  const auto t = testkit::human_role(tomas, image, 4, Split::InTest);
  EXPECT_ERRC(to_training_samples(t, tomas.id, corpus, templates), Errc::PreconditionFailed);
}

TEST_F(Conversion, InterRoleTrainsBothRoles) {
  const auto d = testkit::inter_role(tomas, nell, image, 5, true);
  EXPECT_EQ(training_roles(d).size(), 2u);
}

TEST_F(Conversion, TestTurnSelection) {
  const auto c = testkit::commentary(tomas, image, "Old boards.", Split::InTest);
  EXPECT_EQ(select_test_turn(c, tomas.id, 99), 0);
  const auto d = testkit::human_role(tomas, image, 6, Split::InTest);
  EXPECT_EQ(select_test_turn(d, tomas.id, 5), select_test_turn(d, tomas.id, 5));
  std::map<int, int> hits;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) hits[select_test_turn(d, tomas.id, seed)]++;
  ASSERT_EQ(hits.size(), 3u);
  for (const auto& [turn, n] : hits) {
    EXPECT_EQ(turn % 2, 1);
    EXPECT_NEAR(n / 10000.0, 1.0 / 3.0, 0.02);
  }
}

TEST_F(Conversion, TestSampleCarriesGroundTruth) {
  const auto d = testkit::human_role(tomas, image, 6, Split::InTest);
  const Corpus c({tomas, nell}, {image}, {d});
  const auto s = to_test_sample(d, tomas.id, 3, c, templates);
  EXPECT_EQ(s.ground_truth, d.turns[static_cast<std::size_t>(s.target_turn_index)].text);
  EXPECT_EQ(s.context.size(), static_cast<std::size_t>(s.target_turn_index));
  EXPECT_TRUE(validate_test_samples({s}, c).ok());
}

TEST_F(Conversion, ConvertCorpusCounts) {
  std::vector<Dialogue> ds = {testkit::human_role(tomas, image, 6), testkit::inter_role(tomas, nell, image, 5, false),
                              testkit::commentary(nell, image, "Hm.", Split::InTest),
                              testkit::human_role(nell, image, 4, Split::InTest)};
  const Corpus c({tomas, nell}, {image}, ds);
  const auto out = convert_corpus(c, templates, 7);
  EXPECT_EQ(out.train.size(), 3u + 5u);
  EXPECT_EQ(out.test.size(), 2u);
  EXPECT_TRUE(validate_training_samples(out.train, c).ok());
}

// ----------------------------------------------------------------- stats

TEST(Stats, TokenCounting) {
  EXPECT_EQ(count_tokens("Hello, world! It's 2024."), 5u);
  EXPECT_EQ(count_tokens("\xE4\xBD\xA0\xE5\xA5\xBD"), 2u);
  EXPECT_EQ(count_tokens(""), 0u);
}

TEST(Stats, EmptyCorpusHasAbsentMeans) {
  const auto s = corpus_stats(std::vector<Dialogue>{});
  EXPECT_EQ(s.all()[kOverallSlot].dialogues, 0u);
  EXPECT_FALSE(s.all()[kOverallSlot].mean_turns().has_value());
}

TEST(Stats, SingleDialogueTokens) {
  const auto c = make_character("Tomas Brandt");
  const auto d = testkit::commentary(c, testkit::generic_image("img/a.jpg"), "one two three four five six seven eight nine ten");
  const auto s = corpus_stats(std::vector<Dialogue>{d});
  EXPECT_DOUBLE_EQ(*s.all()[kOverallSlot].mean_tokens(), 10.0);
  EXPECT_DOUBLE_EQ(*s.all()[0].mean_turns(), 1.0);
  EXPECT_EQ(s.by_split.at("Train")[0].dialogues, 1u);
}
