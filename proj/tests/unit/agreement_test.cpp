#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "forge/agreement/gaps.hpp"
#include "forge/agreement/report.hpp"
#include "forge/agreement/statistics.hpp"
#include "oracles.hpp"

using namespace forge;
using namespace forge::agreement;
namespace oracle = forge::testkit::oracle;

TEST(Stats, MaeExamples) {
  EXPECT_EQ(mae(PairedSeries::of({0.5, 0.7}, {0.5, 0.7})), 0.0);
  EXPECT_NEAR(mae(PairedSeries::of({0.9, 1.1}, {1.0, 1.0})), 0.1, 1e-12);
  EXPECT_NEAR(mae(PairedSeries::of({0.7}, {1.0})), 0.3, 1e-12);
}

TEST(Stats, RmseExamples) {
  EXPECT_EQ(rmse(PairedSeries::of({1, 2}, {1, 2})), 0.0);
  EXPECT_NEAR(rmse(PairedSeries::of({0, 0}, {0.3, 0.4})), 0.3535533906, 1e-9);
}

TEST(Stats, PearsonExamples) {
  EXPECT_NEAR(pearson(PairedSeries::of({1, 2, 3}, {1, 2, 3})), 1.0, 1e-12);
  EXPECT_NEAR(pearson(PairedSeries::of({1, 2, 3}, {-1, -2, -3})), -1.0, 1e-12);
  // Direct evaluation: 5 / sqrt(2 * 12.6667) = 0.99339927.
  EXPECT_NEAR(pearson(PairedSeries::of({1, 2, 3}, {2, 4, 7})), 0.9933992678, 1e-9);
  EXPECT_ERRC(pearson(PairedSeries::of({1, 1, 1}, {1, 2, 3})), Errc::ZeroVariance);
}

TEST(Stats, SeriesChecks) {
  EXPECT_ERRC(mae(PairedSeries::of({}, {})), Errc::EmptySeries);
  EXPECT_ERRC(rmse(PairedSeries::of({1}, {1, 2})), Errc::InvalidArgument);
}

TEST(Stats, CronbachExamples) {
  std::vector<std::vector<double>> same;
  for (double v : {1.0, 3.0, 2.0, 5.0}) same.push_back(std::vector<double>(8, v));
  EXPECT_NEAR(cronbach_alpha(same), 1.0, 1e-12);
  EXPECT_ERRC(cronbach_alpha({{1, 0}, {0, 1}}), Errc::DegenerateVariance);
  const std::vector<std::vector<double>> m = {{1, 2}, {2, 3}, {3, 5}};
  EXPECT_NEAR(cronbach_alpha(m), oracle::cronbach(m), 1e-9);
  EXPECT_NEAR(cronbach_alpha(m), 0.9473684211, 1e-9);
  EXPECT_ERRC(cronbach_alpha({{1, 2}}), Errc::InvalidArgument);
}

TEST(Stats, RandomSeriesMatchOracle) {
  KeyedRng rng(5, "stats");
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(20);
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.uniform(0, 2);
      b[i] = rng.uniform(0, 2);
    }
    const auto s = PairedSeries::of(a, b);
    EXPECT_NEAR(mae(s), oracle::mae(a, b), 1e-9);
    EXPECT_NEAR(rmse(s), oracle::rmse(a, b), 1e-9);
    EXPECT_NEAR(pearson(s), oracle::pearson(a, b), 1e-9);
    EXPECT_LE(mae(s), rmse(s) + 1e-15);
  }
}

TEST(Gaps, HumanGapExamples) {
  EXPECT_DOUBLE_EQ(human_gap(std::vector<Choice>{Choice::Better}), 0.4);
  EXPECT_DOUBLE_EQ(human_gap(std::vector<Choice>{Choice::Better, Choice::Worse}), 0.0);
  EXPECT_NEAR(human_gap(std::vector<Choice>{Choice::Better, Choice::Better, Choice::Equal, Choice::Worse}), 0.1, 1e-15);
  EXPECT_ERRC(human_gap(std::vector<Choice>{}), Errc::EmptyInput);
  EXPECT_EQ(invert(Choice::Better), Choice::Worse);
  EXPECT_EQ(parse_choice("Equal"), Choice::Equal);
}

TEST(Gaps, ModelGapExamples) {
  EXPECT_DOUBLE_EQ(model_gap(1.2, 0.6), 0.4);
  EXPECT_DOUBLE_EQ(model_gap(0.9, 0.9), 0.0);
  EXPECT_NEAR(model_gap(0.7, 1.0), -0.3, 1e-12);
  EXPECT_DOUBLE_EQ(model_gap(0.1, 1.9), -0.4);
  EXPECT_ERRC(model_gap(1, 1, 0), Errc::InvalidArgument);
}

TEST(Gaps, SuccessRate) {
  const auto ok = eval::make_trajectory("q", "a", "j", "", testkit::strict_judge_text(std::vector<eval::ScorePair>(8, {5, 5})));
  const auto bad = eval::make_trajectory("q", "b", "j", "", "???");
  EXPECT_EQ(scoring_success_rate({ok, bad, bad}).percent(), "33.33%");
  EXPECT_EQ(scoring_success_rate({ok, ok}).percent(), "100.00%");
  EXPECT_ERRC(scoring_success_rate({}), Errc::EmptyInput);
}

TEST(Gaps, ComparisonCodec) {
  HumanComparison c{"q1", eval::Metric::KC, "a", "b",
                    {{"q1", eval::Metric::KC, "ann-001", Choice::Better}, {"q1", eval::Metric::KC, "ann-002", Choice::Equal}}};
  const auto j = to_json(c);
  EXPECT_DOUBLE_EQ(j["gap"].get<double>(), 0.2);
  const auto back = human_comparison_from_json(j);
  EXPECT_EQ(back.judgments, c.judgments);
}

namespace {

AgreementInputs identical_inputs() {
  AgreementInputs in;
  in.evaluator_id = "e";
  in.reference_id = "r";
  in.evaluator = testkit::synthetic_trajectories(3, 6, "e", 9);
  in.reference = in.evaluator;
  for (auto& t : in.reference) t.judge_id = "r";
  return in;
}

}  // namespace

TEST(Report, IdenticalJudgesHaveZeroError) {
  const auto r = agreement_report(identical_inputs());
  EXPECT_EQ(r.evaluator_vs_reference.overall.mae, 0.0);
  EXPECT_EQ(r.evaluator_vs_reference.overall.rmse, 0.0);
  EXPECT_FALSE(r.imputed);
  EXPECT_TRUE(r.judges.at("e").cronbach_alpha.has_value());
}

TEST(Report, OverallIsMeanOfMetrics) {
  auto in = identical_inputs();
  KeyedRng rng(2, "perturb");
  for (auto& t : in.evaluator) t = eval::make_trajectory(t.sample_id, t.agent_id, "e", "", testkit::strict_judge_text(testkit::random_pairs(rng)));
  const auto r = agreement_report(in);
  double mae_sum = 0, rmse_sum = 0;
  for (const auto& [m, s] : r.evaluator_vs_reference.metrics) {
    mae_sum += s.mae;
    rmse_sum += s.rmse;
  }
  EXPECT_NEAR(r.evaluator_vs_reference.overall.mae, mae_sum / 8, 1e-12);
  EXPECT_NEAR(r.evaluator_vs_reference.overall.rmse, rmse_sum / 8, 1e-12);
}

TEST(Report, FailedEvaluatorIsImputed) {
  auto in = identical_inputs();
  for (auto& t : in.evaluator) t = eval::make_trajectory(t.sample_id, t.agent_id, "e", "", "cannot score");
  const auto r = agreement_report(in);
  EXPECT_TRUE(r.imputed);
  EXPECT_EQ(r.imputed_count, in.evaluator.size());
  EXPECT_EQ(r.judges.at("e").success.ok, 0u);
  const auto again = agreement_report(in);
  EXPECT_EQ(to_json(r).dump(), to_json(again).dump());
}

TEST(Report, KeyMismatch) {
  auto in = identical_inputs();
  in.reference.pop_back();
  EXPECT_ERRC(agreement_report(in), Errc::KeyMismatch);
  auto h = identical_inputs();
  h.human.push_back(HumanComparison{"q0", eval::Metric::IA, "agent-0", "agent-9",
                                    {{"q0", eval::Metric::IA, "ann", Choice::Better}}});
  EXPECT_ERRC(agreement_report(h), Errc::KeyMismatch);
}

TEST(Report, HumanTables) {
  auto in = identical_inputs();
  for (eval::Metric m : eval::kAllMetrics) {
    for (int q = 0; q < 3; ++q) {
      const auto qid = "q" + std::to_string(q);
      in.human.push_back(HumanComparison{qid, m, "agent-0", "agent-1",
                                         {{qid, m, "ann-1", q == 0 ? Choice::Better : Choice::Worse},
                                          {qid, m, "ann-2", Choice::Equal}}});
    }
  }
  const auto r = agreement_report(in);
  ASSERT_TRUE(r.evaluator_vs_human.has_value());
  EXPECT_EQ(r.human_comparisons, 24u);
  EXPECT_EQ(r.evaluator_vs_human->metrics.at(eval::Metric::IA).n, 3u);
  const auto j = to_json(r);
  EXPECT_TRUE(j.contains("evaluator_vs_human"));
}
