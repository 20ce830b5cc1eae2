#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "forge/dataset/conversion.hpp"
#include "forge/eval/metric.hpp"
#include "forge/eval/reward_export.hpp"
#include "forge/eval/score.hpp"
#include "forge/eval/templates.hpp"
#include "forge/eval/trajectory.hpp"

using namespace forge;
using namespace forge::eval;
using testkit::make_character;

TEST(Metric, DimensionsAndNames) {
  EXPECT_EQ(dimension(Metric::IA), Dimension::Conversational);
  EXPECT_EQ(dimension(Metric::Coh), Dimension::Conversational);
  EXPECT_EQ(dimension(Metric::ITR), Dimension::Multimodal);
  EXPECT_EQ(dimension(Metric::RA), Dimension::Multimodal);
  EXPECT_EQ(dimension(Metric::TC), Dimension::RolePlaying);
  for (Metric m : kAllMetrics) {
    EXPECT_EQ(find_metric(to_string(m)), m);
    EXPECT_EQ(find_metric(full_name(m)), m);
    EXPECT_FALSE(definition(m).empty());
  }
  EXPECT_ERRC(parse_metric("Charm"), Errc::SchemaError);
}

TEST(Templates, RenderIsSinglePass) {
  EXPECT_EQ(render_template("{a} and {b}", {{"a", "{b}"}, {"b", "x"}}), "{b} and x");
  EXPECT_ERRC(render_template("{nope}", {}), Errc::InvalidArgument);
  EXPECT_EQ(placeholders("{a}{b}{a}"), (std::set<std::string>{"a", "b"}));
}

class Prompts : public ::testing::Test {
 protected:
  Character tomas = make_character("Tomas Brandt");
  Character nell = make_character("Nell Ashdown");
  ImageRecord image = testkit::generic_image("img/pier.jpg");
  Dialogue hr = testkit::human_role(tomas, image, 4, Split::InTest);
  Dialogue ir = testkit::inter_role(tomas, nell, image, 4, false, Split::InTest);
  Corpus corpus{{tomas, nell}, {image}, {hr, ir}};
};

TEST_F(Prompts, AgentPromptEmbedsProfileAndHistory) {
  const auto ctx = resolve_context(hr.id, 3, corpus);
  const auto p = build_agent_prompt(ctx, AgentTemplates::original());
  EXPECT_NE(p.user.find(tomas.profile.life_story), std::string::npos);
  EXPECT_NE(p.user.find("question 2"), std::string::npos);
  EXPECT_EQ(p.user.find(nell.profile.life_story), std::string::npos);
  EXPECT_EQ(p.image_uri, image.uri);
  EXPECT_NE(p.system.find("role-playing"), std::string::npos);
}

TEST_F(Prompts, InterRoleIncludesPartnerProfile) {
  const auto p = build_agent_prompt(resolve_context(ir.id, 1, corpus), AgentTemplates::original());
  EXPECT_NE(p.user.find(nell.profile.life_story), std::string::npos);
}

TEST_F(Prompts, MissingPlaceholder) {
  auto t = AgentTemplates::original();
  t.human_role.body = "Talk like someone: {role_profile} {role_series} {image} {dialogue_history}";
  EXPECT_ERRC(build_agent_prompt(resolve_context(hr.id, 3, corpus), t), Errc::MissingPlaceholder);
}

TEST_F(Prompts, VariantsDifferButShareHistory) {
  const auto ctx = resolve_context(hr.id, 3, corpus);
  const auto a = build_agent_prompt(ctx, AgentTemplates::original());
  const auto b = build_agent_prompt(ctx, AgentTemplates::modified());
  EXPECT_NE(a.text(), b.text());
  const auto history = render_history(ctx.history, ctx.names);
  EXPECT_NE(a.user.find(history), std::string::npos);
  EXPECT_NE(b.user.find(history), std::string::npos);
}

TEST_F(Prompts, JudgePromptContents) {
  const auto ctx = resolve_context(hr.id, 3, corpus);
  const std::vector<Metric> all(kAllMetrics.begin(), kAllMetrics.end());
  const auto p = build_judge_prompt(ctx, "", "answer 3 verbatim", JudgeTemplate::standard(), all);
  EXPECT_NE(p.user.find("answer 3 verbatim"), std::string::npos);
  EXPECT_NE(p.user.find("(empty response)"), std::string::npos);
  for (Metric m : kAllMetrics) EXPECT_NE(p.user.find(std::string(full_name(m))), std::string::npos);
  const auto single = build_judge_prompt(ctx, "x", "y", JudgeTemplate::standard(), {Metric::PC});
  EXPECT_NE(single.user.find(std::string(full_name(Metric::PC))), std::string::npos);
  EXPECT_EQ(single.user.find(std::string(full_name(Metric::KC))), std::string::npos);
}

TEST(Parser, StrictEightBlocks) {
  const std::vector<ScorePair> pairs(8, ScorePair{8, 9});
  const auto r = parse_assessments(testkit::strict_judge_text(pairs));
  ASSERT_EQ(r.outcome, ParseOutcome::Ok);
  EXPECT_EQ(r.mode, ParseMode::Strict);
  EXPECT_EQ(r.assessments.size(), 8u);
}

TEST(Parser, SevenBlocksFail) {
  std::string text = testkit::strict_judge_text(std::vector<ScorePair>(8, ScorePair{8, 9}));
  text = text.substr(0, text.rfind("TC:"));
  EXPECT_EQ(parse_assessments(text).outcome, ParseOutcome::Failed);
}

TEST(Parser, SingleBlockPair) {
  ParseOptions opt;
  opt.metrics = {Metric::PC};
  const auto r = parse_assessments("PC: matches Tony Stark's bravado. Scores: 9 10", opt);
  ASSERT_EQ(r.outcome, ParseOutcome::Ok);
  EXPECT_EQ(r.assessments[0].pair, (ScorePair{9, 10}));
  EXPECT_EQ(r.assessments[0].commentary, "matches Tony Stark's bravado.");
}

TEST(Parser, LenientRecovers) {
  KeyedRng rng(4, "lenient");
  const auto pairs = testkit::random_pairs(rng);
  const auto r = parse_assessments(testkit::lenient_judge_text(pairs));
  ASSERT_EQ(r.outcome, ParseOutcome::Ok) << r.failure;
  EXPECT_EQ(r.mode, ParseMode::Lenient);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(r.assessments[i].pair, pairs[i]);
}

TEST(Parser, OutOfRangeAndGarbageFail) {
  std::string text = testkit::strict_judge_text(std::vector<ScorePair>(8, ScorePair{8, 9}));
  text.replace(text.find("Scores: 8 9"), 11, "Scores: 8 19");
  EXPECT_EQ(parse_assessments(text).outcome, ParseOutcome::Failed);
  EXPECT_EQ(parse_assessments("I refuse to grade this.").outcome, ParseOutcome::Failed);
  EXPECT_EQ(parse_assessments("").outcome, ParseOutcome::Failed);
}

TEST(Parser, CommentaryIsCapped) {
  ParseOptions opt;
  opt.metrics = {Metric::IA};
  opt.commentary_chars = 10;
  const auto r = parse_assessments("IA: " + std::string(50, 'a') + " Scores: 5 6", opt);
  ASSERT_EQ(r.outcome, ParseOutcome::Ok);
  EXPECT_EQ(r.assessments[0].commentary.size(), 10u);
}

TEST(Trajectory, PersistAndReparse) {
  const auto t = make_trajectory("q1", "agent-a", "judge", "hi", testkit::lenient_judge_text(std::vector<ScorePair>(8, {7, 8})));
  const auto back = trajectory_from_json(to_json(t));
  EXPECT_EQ(back, t);
  EXPECT_EQ(reparse(back), t);
}

TEST(Quantify, Examples) {
  EXPECT_EQ(quantify({9, 10}), Ratio(9, 10));
  EXPECT_DOUBLE_EQ(quantify({9, 10}).value(), 0.9);
  EXPECT_EQ(quantify({10, 10}), Ratio(1, 1));
  EXPECT_EQ(quantify({8, 7}).render(), "1.143");
  EXPECT_ERRC(quantify({0, 10}), Errc::RangeError);
  EXPECT_ERRC(quantify({5, 11}), Errc::RangeError);
}

TEST(Quantify, RatioArithmetic) {
  EXPECT_EQ(Ratio(2, 4), Ratio(1, 2));
  EXPECT_EQ(Ratio(1, 3) + Ratio(1, 6), Ratio(1, 2));
  EXPECT_EQ(Ratio(3, 2) / 3, Ratio(1, 2));
  EXPECT_TRUE(Ratio(1, 3) < Ratio(1, 2));
  EXPECT_ERRC(Ratio(1, 0), Errc::RangeError);
}

TEST(Segment, OkAndFailed) {
  const auto t = make_trajectory("q", "a", "j", "", testkit::strict_judge_text(std::vector<ScorePair>(8, {9, 10})));
  const auto recs = segment_trajectory(t);
  ASSERT_EQ(recs.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(recs[i].metric, kAllMetrics[i]);
  EXPECT_EQ(metric_sample_from_json(to_json(recs[3])), recs[3]);
  EXPECT_ERRC(segment_trajectory(make_trajectory("q", "a", "j", "", "nonsense")), Errc::NotParsed);
}

TEST(Aggregate, Examples) {
  std::vector<MetricSample> records;
  for (Metric m : kAllMetrics) records.push_back({"q1", "a", "j", m, "", {10, 10}, Ratio(1, 1)});
  auto t = aggregate(records);
  EXPECT_EQ(*t.agents.at("a").overall, Ratio(1, 1));

  std::vector<MetricSample> ia = {{"q1", "a", "j", Metric::IA, "", {8, 10}, Ratio(8, 10)},
                                  {"q2", "a", "j", Metric::IA, "", {10, 10}, Ratio(1, 1)}};
  t = aggregate(ia);
  EXPECT_EQ(t.agents.at("a").metrics.at(Metric::IA).mean, Ratio(9, 10));
  EXPECT_FALSE(t.agents.at("a").overall.has_value());
}

TEST(Aggregate, OrderIndependent) {
  std::vector<MetricSample> recs;
  for (const auto& t : testkit::synthetic_trajectories(3, 5, "j", 2)) {
    for (auto& r : segment_trajectory(t)) recs.push_back(r);
  }
  auto shuffled = recs;
  KeyedRng(1, "order").shuffle(shuffled);
  const auto a = aggregate(recs), b = aggregate(shuffled);
  for (const auto& [agent, s] : a.agents) EXPECT_EQ(*s.overall, *b.agents.at(agent).overall);
  const auto rows = score_rows(a, "j");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_TRUE(rows[0].contains("overall_display"));
}

TEST(Aggregate, TableFourRow) {
  const int per_mille[8] = {998, 1000, 997, 993, 987, 1000, 992, 988};
  std::vector<MetricSample> recs;
  for (std::size_t i = 0; i < 8; ++i) {
    recs.push_back({"q", "agent", "j", kAllMetrics[i], "", {1, 1}, Ratio(per_mille[i], 1000)});
  }
  const auto t = aggregate(recs);
  EXPECT_NEAR(t.agents.at("agent").overall->value(), 0.994, 0.0005);
}

TEST(Reward, HoldoutSplit) {
  const auto trajs = testkit::synthetic_trajectories(10, 294, "judge", 1);
  const auto split = export_reward_training(trajs, HoldoutSpec{20, 2, {}, 3},
                                            [](const EvaluationTrajectory& t, Metric m) {
                                              return t.sample_id + "/" + std::string(to_string(m));
                                            });
  EXPECT_EQ(split.validation.size(), 320u);
  EXPECT_EQ(split.train.size(), 23200u);
  EXPECT_EQ(split.holdout.size(), 40u);
}

TEST(Reward, NoHoldoutAndInsufficient) {
  auto builder = [](const EvaluationTrajectory&, Metric) { return std::string("p"); };
  const auto trajs = testkit::synthetic_trajectories(2, 3, "judge", 1);
  const auto all_train = export_reward_training(trajs, HoldoutSpec{0, 2, {}, 0}, builder);
  EXPECT_TRUE(all_train.validation.empty());
  EXPECT_EQ(all_train.train.size(), 48u);

  auto thin = trajs;
  thin.erase(std::remove_if(thin.begin(), thin.end(),
                            [](const EvaluationTrajectory& t) { return t.sample_id == "q1" && t.agent_id == "agent-1"; }),
             thin.end());
  try {
    export_reward_training(thin, HoldoutSpec{1, 2, {"q1"}, 0}, builder);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InsufficientData);
    EXPECT_NE(std::string(e.what()).find("q1"), std::string::npos);
  }
}

TEST(Reward, RecordCodec) {
  RewardRecord r{"prompt", "IA: ok Scores: 5 6", Metric::IA, "q", "a"};
  EXPECT_EQ(reward_record_from_json(to_json(r)), r);
}
