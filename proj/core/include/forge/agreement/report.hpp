#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/agreement/gaps.hpp"
#include "forge/agreement/statistics.hpp"
#include "forge/eval/score.hpp"
#include "forge/eval/trajectory.hpp"

namespace forge::agreement {

using json = nlohmann::json;

struct MetricStats {
  std::size_t n = 0;
  double mae = 0.0;
  double rmse = 0.0;
  /// Absent when either side has zero variance.
  std::optional<double> pearson;
};

MetricStats compute_stats(const PairedSeries& s);

struct ComparisonTable {
  std::map<eval::Metric, MetricStats> metrics;
  /// Mean of the per-metric values (canonical). Pearson is averaged over the
  /// metrics where it is defined.
  MetricStats overall;
  std::size_t pearson_metrics = 0;
  /// One computation over all metrics' pairs pooled together.
  MetricStats pooled;
};

/// Builds a table from per-metric series; metrics with no pairs are skipped.
ComparisonTable compare(const std::map<eval::Metric, PairedSeries>& series);

struct AgreementInputs {
  std::string evaluator_id;
  std::string reference_id;
  std::vector<eval::EvaluationTrajectory> evaluator;
  std::vector<eval::EvaluationTrajectory> reference;
  std::vector<HumanComparison> human;
  std::uint64_t seed = 0;
  double cap = 0.4;
  eval::ScoreScale scale;
  /// Failed trajectories get uniform draws in [impute_low, impute_high].
  double impute_low = 0.1;
  double impute_high = 1.0;
};

struct JudgeSummary {
  SuccessRate success;
  std::size_t imputed_trajectories = 0;
  std::optional<double> cronbach_alpha;
  std::string cronbach_note;
};

struct AgreementReport {
  std::string evaluator_id;
  std::string reference_id;
  std::uint64_t seed = 0;
  double cap = 0.4;
  bool imputed = false;
  std::size_t imputed_count = 0;
  std::map<std::string, JudgeSummary> judges;
  ComparisonTable evaluator_vs_reference;
  std::optional<ComparisonTable> evaluator_vs_human;
  std::optional<ComparisonTable> reference_vs_human;
  std::size_t human_comparisons = 0;
};

/// Per-(sample, agent, metric) scores for one judge; failed trajectories are
/// filled with seeded uniform draws. Returns the number of imputed trajectories.
using ScoreMap = std::map<std::tuple<std::string, std::string, eval::Metric>, double>;
std::size_t judge_scores(const std::vector<eval::EvaluationTrajectory>& trajectories, const AgreementInputs& in,
                         const std::string& judge_id, ScoreMap& out);

/// KeyMismatch when evaluator and reference cover different (sample, agent)
/// keys or a human comparison names an unscored response.
AgreementReport agreement_report(const AgreementInputs& inputs);

json to_json(const AgreementReport& r);

}  // namespace forge::agreement
