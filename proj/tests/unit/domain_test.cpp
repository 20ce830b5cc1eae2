#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "forge/domain/codec.hpp"
#include "forge/domain/context.hpp"
#include "forge/domain/corpus.hpp"
#include "forge/domain/ids.hpp"
#include "forge/domain/validation.hpp"
#include "forge/util/jsonl.hpp"

using namespace forge;
using forge::testkit::make_character;

TEST(Ids, CharacterIdDependsOnIdentityOnly) {
  auto a = make_character("Tomas Brandt");
  auto b = a;
  b.profile.personality = "Different";
  b.split = Split::OutTest;
  EXPECT_EQ(compute_id(a), compute_id(b));
  b.name = "Tomas Brandt II";
  EXPECT_NE(compute_id(a), compute_id(b));
}

TEST(Ids, DialogueIdCoversTurns) {
  const auto c = make_character("Tomas Brandt");
  const auto img = testkit::generic_image("img/a.jpg");
  auto d = testkit::human_role(c, img, 4);
  auto e = d;
  e.turns[1].text = "changed";
  EXPECT_NE(compute_id(d), compute_id(e));
  EXPECT_EQ(d.id.substr(0, 4), "dlg_");
}

TEST(Codec, RoundTripAllRecordTypes) {
  const auto c = make_character("Nell Ashdown");
  EXPECT_EQ(character_from_json(to_json(c)), c);
  const auto img = testkit::related_image("img/maps.jpg", c);
  EXPECT_EQ(image_from_json(to_json(img)), img);
  const auto d = testkit::inter_role(c, make_character("Tomas Brandt"), img, 5, false);
  EXPECT_EQ(dialogue_from_json(to_json(d)), d);
  MetaInfo m{"Ilse", "female", "wry", "a ferry clerk"};
  EXPECT_EQ(meta_info_from_json(to_json(m)), m);
}

TEST(Codec, StrictRejectsUnknownFieldsLenientIgnores) {
  auto j = to_json(make_character("Nell Ashdown"));
  j["extra"] = 1;
  EXPECT_ERRC(character_from_json(j, Strictness::Strict), Errc::SchemaError);
  EXPECT_NO_THROW(character_from_json(j, Strictness::Lenient));
}

TEST(Codec, MissingFieldAndBadEnum) {
  auto j = to_json(make_character("Nell Ashdown"));
  j.erase("series");
  EXPECT_ERRC(character_from_json(j), Errc::SchemaError);
  auto k = to_json(make_character("Nell Ashdown"));
  k["split"] = "Validation";
  EXPECT_ERRC(character_from_json(k), Errc::SchemaError);
}

TEST(Validation, CompleteCharacterHasNoViolations) {
  EXPECT_TRUE(validate_character(make_character("Tomas Brandt")).ok());
}

TEST(Validation, EmptyCatchphrases) {
  auto c = make_character("Tomas Brandt");
  c.profile.catchphrases.clear();
  const auto r = validate_character(c);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].message, "missing catchphrases");
}

TEST(Validation, MissingProfilePart) {
  auto c = make_character("Tomas Brandt");
  c.profile.life_story = "  ";
  EXPECT_FALSE(validate_character(c).ok());
}

TEST(Validation, CharacterRelatedImageWithoutAnnotationAtCorpusLevel) {
  const auto c = make_character("Tomas Brandt");
  auto img = testkit::related_image("img/maps.jpg", c);
  img.annotation.reset();
  img = with_id(img);
  const auto d = testkit::commentary(c, img, "These are my maps.");
  const Corpus corpus({c}, {img}, {d});
  const auto r = validate_corpus(corpus);
  EXPECT_TRUE(r.has_rule("image.annotation"));
}

TEST(Validation, NonAlternatingTurnsNamed) {
  const auto c = make_character("Tomas Brandt");
  const auto img = testkit::generic_image("img/a.jpg");
  auto d = testkit::human_role(c, img, 4);
  d.turns[2].speaker = Speaker::character(c.id);
  d = with_id(d);
  const auto r = validate_dialogue(d);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].record_id, d.id);
  EXPECT_EQ(r.violations[0].rule, "dialogue.structure");
}

TEST(Validation, InterRoleMayOpenWithEitherSpeaker) {
  const auto a = make_character("Tomas Brandt");
  const auto b = make_character("Nell Ashdown");
  const auto img = testkit::generic_image("img/a.jpg");
  EXPECT_TRUE(validate_dialogue(testkit::inter_role(a, b, img, 4, true)).ok());
  EXPECT_TRUE(validate_dialogue(testkit::inter_role(a, b, img, 3, false)).ok());
}

TEST(Validation, CorpusCrossRules) {
  const auto a = make_character("Tomas Brandt");
  const auto other = make_character("Oren Pike", "Lanterns of Quillhaven");
  const auto ood = make_character("Sable Mirren", "The Salt Road", Split::OutTest);
  const auto img = testkit::generic_image("img/a.jpg");
  const auto mixed = testkit::inter_role(a, other, img, 2, true);
  const auto leak = testkit::commentary(ood, img, "I should not be here.", Split::Train);
  const auto lost_image = testkit::commentary(a, testkit::generic_image("img/nowhere.jpg"), "Hm.");
  const auto r = validate_corpus(Corpus({a, other, ood}, {img}, {mixed, leak, lost_image}));
  EXPECT_TRUE(r.has_rule("dialogue.series"));
  EXPECT_TRUE(r.has_rule("dialogue.split"));
  EXPECT_TRUE(r.has_rule("dialogue.image"));
}

TEST(Validation, OwnedImageMustBelongToParticipant) {
  const auto a = make_character("Tomas Brandt");
  const auto b = make_character("Nell Ashdown");
  const auto img = testkit::related_image("img/maps.jpg", b);
  const auto d = testkit::commentary(a, img, "Whose maps are these?");
  EXPECT_FALSE(validate_corpus(Corpus({a, b}, {img}, {d})).ok());
  const auto e = testkit::commentary(b, img, "My maps.");
  EXPECT_TRUE(validate_corpus(Corpus({a, b}, {img}, {e})).ok());
}

TEST(Context, HumanRolePrefix) {
  const auto c = make_character("Tomas Brandt");
  const auto d = testkit::human_role(c, testkit::generic_image("img/a.jpg"), 4);
  const auto v = context_view(d, 3);
  ASSERT_EQ(v.prior_turns.size(), 3u);
  EXPECT_EQ(v.prior_turns, std::vector<Turn>(d.turns.begin(), d.turns.begin() + 3));
  EXPECT_EQ(v.profile_count(), 1u);
  EXPECT_EQ(v.role_id, c.id);
}

TEST(Context, InterRoleOpenedByRole) {
  const auto a = make_character("Tomas Brandt");
  const auto b = make_character("Nell Ashdown");
  const auto d = testkit::inter_role(a, b, testkit::generic_image("img/a.jpg"), 4, true);
  const auto v = context_view(d, 0);
  EXPECT_TRUE(v.prior_turns.empty());
  EXPECT_EQ(v.profile_count(), 2u);
  EXPECT_EQ(v.other_role_id, b.id);
}

TEST(Context, Commentary) {
  const auto c = make_character("Tomas Brandt");
  const auto d = testkit::commentary(c, testkit::generic_image("img/a.jpg"), "Fine rope.");
  const auto v = context_view(d, 0);
  EXPECT_TRUE(v.prior_turns.empty());
  EXPECT_EQ(v.profile_count(), 1u);
}

TEST(Context, Errors) {
  const auto c = make_character("Tomas Brandt");
  const auto d = testkit::human_role(c, testkit::generic_image("img/a.jpg"), 4);
  EXPECT_ERRC(context_view(d, 4), Errc::IndexOutOfRange);
  EXPECT_ERRC(context_view(d, -1), Errc::IndexOutOfRange);
  EXPECT_ERRC(context_view(d, 2), Errc::WrongSpeaker);
  EXPECT_ERRC(context_view(d, 3, "ch_other"), Errc::WrongSpeaker);
  EXPECT_EQ(role_turn_indices(d, c.id), (std::vector<int>{1, 3}));
}

TEST(Corpus, LoadFromDirectoryAndLookup) {
  const auto dir = testkit::scratch_dir("corpus");
  const auto c = make_character("Tomas Brandt");
  const auto img = testkit::generic_image("img/a.jpg");
  const auto d = testkit::commentary(c, img, "Nice.");
  write_jsonl(dir / std::string(kCharactersFile), {to_json(c)});
  write_jsonl(dir / std::string(kImagesFile), {to_json(img)});
  write_jsonl(dir / std::string(kDialoguesFile), {to_json(d)});
  const auto corpus = Corpus::load(dir);
  EXPECT_EQ(corpus.require_character(c.id), c);
  EXPECT_EQ(corpus.dialogue(d.id)->turns.size(), 1u);
  EXPECT_EQ(corpus.image("img_missing"), nullptr);
}
