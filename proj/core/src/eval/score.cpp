#include "forge/eval/score.hpp"

#include <cstdio>
#include <numeric>

#include "forge/util/error.hpp"

namespace forge::eval {

namespace {

__extension__ using i128 = __int128;

std::int64_t checked(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(Errc::RangeError, "ratio arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

}  // namespace

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(Errc::RangeError, "ratio with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / (g == 0 ? 1 : g);
  den_ = den / (g == 0 ? 1 : g);
}

std::string Ratio::render(int decimals) const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value());
  return buf;
}

Ratio Ratio::operator+(const Ratio& o) const {
  const std::int64_t g = std::gcd(den_, o.den_);
  const i128 l = static_cast<i128>(den_ / g) * o.den_;
  const i128 n = static_cast<i128>(num_) * (o.den_ / g) + static_cast<i128>(o.num_) * (den_ / g);
  // reduce in 128 bits before narrowing
  i128 a = n < 0 ? -n : n, b = l;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  const i128 d = a == 0 ? 1 : a;
  return Ratio(checked(n / d), checked(l / d));
}

Ratio Ratio::operator/(std::int64_t k) const {
  if (k == 0) throw Error(Errc::RangeError, "ratio divided by zero");
  return Ratio(num_, checked(static_cast<i128>(den_) * k));
}

bool Ratio::operator<(const Ratio& o) const {
  return static_cast<i128>(num_) * o.den_ < static_cast<i128>(o.num_) * den_;
}

Ratio quantify(const ScorePair& pair, const ScoreScale& scale) {
  if (scale.min < 1 || scale.max < scale.min) throw Error(Errc::RangeError, "invalid score scale");
  auto in = [&](int v) { return v >= scale.min && v <= scale.max; };
  if (!in(pair.evaluated) || !in(pair.reference)) {
    throw Error(Errc::RangeError, "score pair (" + std::to_string(pair.evaluated) + ", " +
                                      std::to_string(pair.reference) + ") outside [" + std::to_string(scale.min) +
                                      ", " + std::to_string(scale.max) + "]");
  }
  return Ratio(pair.evaluated, pair.reference);
}

json to_json(const MetricSample& s) {
  return json{{"sample_id", s.sample_id},
              {"agent_id", s.agent_id},
              {"judge_id", s.judge_id},
              {"metric", to_string(s.metric)},
              {"commentary", s.commentary},
              {"scores", {s.pair.evaluated, s.pair.reference}},
              {"ratio", {s.ratio.num(), s.ratio.den()}},
              {"score", s.ratio.render()}};
}

MetricSample metric_sample_from_json(const json& j) {
  try {
    MetricSample s;
    s.sample_id = j.at("sample_id").get<std::string>();
    s.agent_id = j.at("agent_id").get<std::string>();
    s.judge_id = j.at("judge_id").get<std::string>();
    s.metric = parse_metric(j.at("metric").get<std::string>());
    s.commentary = j.at("commentary").get<std::string>();
    s.pair = {j.at("scores").at(0).get<int>(), j.at("scores").at(1).get<int>()};
    s.ratio = Ratio(j.at("ratio").at(0).get<std::int64_t>(), j.at("ratio").at(1).get<std::int64_t>());
    return s;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaError, std::string("MetricSample: ") + e.what());
  }
}

ScoreTable aggregate(const std::vector<MetricSample>& records) {
  struct Acc {
    Ratio sum;
    std::int64_t n = 0;
  };
  std::map<CellKey, Acc> cells;
  for (const auto& r : records) {
    auto& acc = cells[CellKey{r.agent_id, r.sample_id, r.metric}];
    acc.sum = acc.sum + r.ratio;
    ++acc.n;
  }
  ScoreTable table;
  std::map<std::pair<std::string, Metric>, Acc> per_metric;
  for (const auto& [key, acc] : cells) {
    const Ratio cell = acc.sum / acc.n;
    table.cells[key] = cell;
    auto& m = per_metric[{key.agent, key.metric}];
    m.sum = m.sum + cell;
    ++m.n;
  }
  for (const auto& [key, acc] : per_metric) {
    table.agents[key.first].metrics[key.second] = MetricMean{acc.sum / acc.n, static_cast<std::size_t>(acc.n)};
  }
  for (auto& [agent, scores] : table.agents) {
    if (scores.metrics.size() != kAllMetrics.size()) continue;
    Ratio sum;
    for (const auto& [metric, mean] : scores.metrics) sum = sum + mean.mean;
    scores.overall = sum / static_cast<std::int64_t>(kAllMetrics.size());
  }
  return table;
}

std::vector<json> score_rows(const ScoreTable& table, const std::string& judge_id) {
  std::vector<json> rows;
  for (const auto& [agent, scores] : table.agents) {
    json metrics = json::object();
    for (Metric m : kAllMetrics) {
      const auto it = scores.metrics.find(m);
      if (it == scores.metrics.end()) {
        metrics[std::string(to_string(m))] = nullptr;
      } else {
        metrics[std::string(to_string(m))] = {{"mean", it->second.mean.value()},
                                              {"display", it->second.mean.render()},
                                              {"samples", it->second.samples}};
      }
    }
    json row{{"judge", judge_id}, {"agent", agent}, {"metrics", std::move(metrics)}};
    row["overall"] = scores.overall ? json(scores.overall->value()) : json(nullptr);
    row["overall_display"] = scores.overall ? json(scores.overall->render()) : json(nullptr);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace forge::eval
