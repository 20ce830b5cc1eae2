#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/eval/metric.hpp"
#include "forge/eval/score.hpp"

namespace forge::eval {

using json = nlohmann::json;

struct MetricAssessment {
  Metric metric = Metric::IA;
  std::string commentary;
  ScorePair pair;

  bool operator==(const MetricAssessment&) const = default;
};

enum class ParseOutcome { Ok, Failed };
/// Which grammar accepted the text.
enum class ParseMode { Strict, Lenient, None };

std::string_view to_string(ParseOutcome o);
std::string_view to_string(ParseMode m);

struct ParseOptions {
  ScoreScale scale;
  /// Commentary longer than this many code points is truncated.
  std::size_t commentary_chars = 400;
  /// Metrics expected, in order. Defaults to all eight.
  std::vector<Metric> metrics{kAllMetrics.begin(), kAllMetrics.end()};
};

struct ParseResult {
  ParseOutcome outcome = ParseOutcome::Failed;
  ParseMode mode = ParseMode::None;
  std::vector<MetricAssessment> assessments;
  /// Why both grammars rejected the text; empty on success.
  std::string failure;
};

/// Strict grammar first: one "<Abbrev>: <commentary> Scores: a b" block per
/// metric, in order, nothing else. Then a lenient scan that accepts full
/// names, markdown decoration and loose score phrasing. Never throws.
ParseResult parse_assessments(const std::string& raw, const ParseOptions& options = {});

struct EvaluationTrajectory {
  std::string sample_id;
  std::string agent_id;
  std::string judge_id;
  std::string agent_response;
  std::string raw;
  std::vector<MetricAssessment> assessments;
  ParseOutcome parse_outcome = ParseOutcome::Failed;
  ParseMode parse_mode = ParseMode::None;
  std::string failure;

  bool ok() const { return parse_outcome == ParseOutcome::Ok; }
  bool operator==(const EvaluationTrajectory&) const = default;
};

EvaluationTrajectory parse_trajectory(const std::string& raw, const ParseOptions& options = {});
EvaluationTrajectory make_trajectory(std::string sample_id, std::string agent_id, std::string judge_id,
                                     std::string agent_response, std::string raw, const ParseOptions& options = {});

json to_json(const EvaluationTrajectory& t);
EvaluationTrajectory trajectory_from_json(const json& j);

/// Re-runs the parser over the stored raw text.
EvaluationTrajectory reparse(const EvaluationTrajectory& t, const ParseOptions& options = {});

/// One record per assessment, in order; NotParsed for a Failed trajectory.
std::vector<MetricSample> segment_trajectory(const EvaluationTrajectory& t, const ScoreScale& scale = {});

/// Canonical block text for one assessment.
std::string format_assessment(const MetricAssessment& a);

}  // namespace forge::eval
