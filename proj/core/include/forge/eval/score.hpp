#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/eval/metric.hpp"

namespace forge::eval {

using json = nlohmann::json;

/// Exact non-negative-denominator rational, always in lowest terms.
class Ratio {
 public:
  Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  /// Fixed three-decimal rendering, e.g. "1.143".
  std::string render(int decimals = 3) const;

  Ratio operator+(const Ratio& o) const;
  Ratio operator/(std::int64_t k) const;
  bool operator==(const Ratio& o) const = default;
  bool operator<(const Ratio& o) const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Integer judge scale; both members of a pair must lie in [min, max].
struct ScoreScale {
  int min = 1;
  int max = 10;
};

struct ScorePair {
  int evaluated = 0;
  int reference = 0;

  bool operator==(const ScorePair&) const = default;
};

/// evaluated / reference as an exact ratio; RangeError when outside the scale.
Ratio quantify(const ScorePair& pair, const ScoreScale& scale = {});

/// One metric of one judged response.
struct MetricSample {
  std::string sample_id;
  std::string agent_id;
  std::string judge_id;
  Metric metric = Metric::IA;
  std::string commentary;
  ScorePair pair;
  Ratio ratio;

  bool operator==(const MetricSample&) const = default;
};

json to_json(const MetricSample& s);
MetricSample metric_sample_from_json(const json& j);

struct MetricMean {
  Ratio mean;
  std::size_t samples = 0;
};

struct AgentScores {
  std::map<Metric, MetricMean> metrics;
  /// Mean of the eight metric means; absent unless all eight are present.
  std::optional<Ratio> overall;
};

struct CellKey {
  std::string agent;
  std::string sample;
  Metric metric = Metric::IA;
  auto operator<=>(const CellKey&) const = default;
};

struct ScoreTable {
  /// Per (agent, sample, metric) ratio; repeated records for a cell are averaged.
  std::map<CellKey, Ratio> cells;
  std::map<std::string, AgentScores> agents;
};

/// Exact fold; the result does not depend on record order.
ScoreTable aggregate(const std::vector<MetricSample>& records);

/// One row per agent: {"agent", "metrics": {IA: {"mean", "display", "samples"}}, "overall", "overall_display"}.
std::vector<json> score_rows(const ScoreTable& table, const std::string& judge_id);

}  // namespace forge::eval
