#include "forge/agreement/report.hpp"

#include <set>

#include "forge/util/error.hpp"
#include "forge/util/rng.hpp"

namespace forge::agreement {

MetricStats compute_stats(const PairedSeries& s) {
  MetricStats m;
  m.n = s.a.size();
  m.mae = mae(s);
  m.rmse = rmse(s);
  try {
    m.pearson = pearson(s);
  } catch (const Error& e) {
    if (e.code() != Errc::ZeroVariance) throw;
  }
  return m;
}

ComparisonTable compare(const std::map<eval::Metric, PairedSeries>& series) {
  ComparisonTable t;
  PairedSeries pooled;
  double pearson_sum = 0.0;
  for (const auto& [metric, s] : series) {
    if (s.a.empty()) continue;
    const auto stats = compute_stats(s);
    t.metrics[metric] = stats;
    t.overall.mae += stats.mae;
    t.overall.rmse += stats.rmse;
    t.overall.n += stats.n;
    if (stats.pearson) {
      pearson_sum += *stats.pearson;
      ++t.pearson_metrics;
    }
    pooled.a.insert(pooled.a.end(), s.a.begin(), s.a.end());
    pooled.b.insert(pooled.b.end(), s.b.begin(), s.b.end());
  }
  if (!t.metrics.empty()) {
    t.overall.mae /= static_cast<double>(t.metrics.size());
    t.overall.rmse /= static_cast<double>(t.metrics.size());
    if (t.pearson_metrics > 0) t.overall.pearson = pearson_sum / static_cast<double>(t.pearson_metrics);
    t.pooled = compute_stats(pooled);
  }
  return t;
}

std::size_t judge_scores(const std::vector<eval::EvaluationTrajectory>& trajectories, const AgreementInputs& in,
                         const std::string& judge_id, ScoreMap& out) {
  std::size_t imputed = 0;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& t : trajectories) {
    if (!seen.insert({t.sample_id, t.agent_id}).second) {
      throw Error(Errc::KeyMismatch, judge_id + " has two trajectories for sample " + t.sample_id + ", agent " +
                                         t.agent_id);
    }
    if (t.ok()) {
      for (const auto& s : eval::segment_trajectory(t, in.scale)) {
        out[{t.sample_id, t.agent_id, s.metric}] = s.ratio.value();
      }
      continue;
    }
    ++imputed;
    for (eval::Metric m : eval::kAllMetrics) {
      KeyedRng rng(in.seed, "impute/" + judge_id + "/" + t.sample_id + "/" + t.agent_id + "/" +
                                std::string(eval::to_string(m)));
      out[{t.sample_id, t.agent_id, m}] = rng.uniform(in.impute_low, in.impute_high);
    }
  }
  return imputed;
}

namespace {

JudgeSummary summarize(const std::vector<eval::EvaluationTrajectory>& trajectories, const ScoreMap& scores,
                       std::size_t imputed) {
  JudgeSummary s;
  s.success = scoring_success_rate(trajectories);
  s.imputed_trajectories = imputed;
  std::map<std::pair<std::string, std::string>, std::vector<double>> rows;
  for (const auto& [key, value] : scores) {
    auto& row = rows[{std::get<0>(key), std::get<1>(key)}];
    row.resize(eval::kAllMetrics.size());
    row[eval::metric_index(std::get<2>(key))] = value;
  }
  std::vector<std::vector<double>> matrix;
  for (auto& [key, row] : rows) matrix.push_back(std::move(row));
  try {
    s.cronbach_alpha = cronbach_alpha(matrix);
  } catch (const Error& e) {
    s.cronbach_note = e.what();
  }
  return s;
}

double lookup(const ScoreMap& scores, const std::string& judge, const std::string& q, const std::string& agent,
              eval::Metric m) {
  const auto it = scores.find({q, agent, m});
  if (it == scores.end()) {
    throw Error(Errc::KeyMismatch, "human comparison on question " + q + " / " + std::string(eval::to_string(m)) +
                                       " names agent " + agent + ", which " + judge + " did not score");
  }
  return it->second;
}

ComparisonTable versus_human(const ScoreMap& scores, const std::string& judge, const AgreementInputs& in) {
  std::map<eval::Metric, PairedSeries> series;
  for (const auto& c : in.human) {
    if (c.judgments.empty()) continue;
    const double gap = model_gap(lookup(scores, judge, c.question_id, c.agent_a, c.metric),
                                 lookup(scores, judge, c.question_id, c.agent_b, c.metric), in.cap);
    auto& s = series[c.metric];
    s.labels.push_back(c.question_id + "/" + c.agent_a + "/" + c.agent_b);
    s.a.push_back(gap);
    s.b.push_back(c.gap());
  }
  return compare(series);
}

}  // namespace

AgreementReport agreement_report(const AgreementInputs& in) {
  AgreementReport r;
  r.evaluator_id = in.evaluator_id;
  r.reference_id = in.reference_id;
  r.seed = in.seed;
  r.cap = in.cap;

  ScoreMap eval_scores, ref_scores;
  const auto eval_imputed = judge_scores(in.evaluator, in, in.evaluator_id, eval_scores);
  const auto ref_imputed = judge_scores(in.reference, in, in.reference_id, ref_scores);

  std::set<std::pair<std::string, std::string>> eval_keys, ref_keys;
  for (const auto& t : in.evaluator) eval_keys.insert({t.sample_id, t.agent_id});
  for (const auto& t : in.reference) ref_keys.insert({t.sample_id, t.agent_id});
  if (eval_keys != ref_keys) {
    std::string example;
    for (const auto& k : eval_keys) {
      if (!ref_keys.count(k)) {
        example = k.first + "/" + k.second + " scored only by " + in.evaluator_id;
        break;
      }
    }
    if (example.empty()) {
      for (const auto& k : ref_keys) {
        if (!eval_keys.count(k)) {
          example = k.first + "/" + k.second + " scored only by " + in.reference_id;
          break;
        }
      }
    }
    throw Error(Errc::KeyMismatch, "evaluator and reference cover different responses: " + example);
  }

  r.judges[in.evaluator_id] = summarize(in.evaluator, eval_scores, eval_imputed);
  if (in.reference_id != in.evaluator_id) r.judges[in.reference_id] = summarize(in.reference, ref_scores, ref_imputed);
  r.imputed_count = eval_imputed + (in.reference_id != in.evaluator_id ? ref_imputed : 0);
  r.imputed = r.imputed_count > 0;

  std::map<eval::Metric, PairedSeries> series;
  for (const auto& [key, value] : eval_scores) {
    auto& s = series[std::get<2>(key)];
    s.labels.push_back(std::get<0>(key) + "/" + std::get<1>(key));
    s.a.push_back(value);
    s.b.push_back(ref_scores.at(key));
  }
  r.evaluator_vs_reference = compare(series);

  for (const auto& c : in.human) r.human_comparisons += c.judgments.empty() ? 0 : 1;
  if (r.human_comparisons > 0) {
    r.evaluator_vs_human = versus_human(eval_scores, in.evaluator_id, in);
    r.reference_vs_human = versus_human(ref_scores, in.reference_id, in);
  }
  return r;
}

namespace {

json stats_json(const MetricStats& s) {
  return json{{"n", s.n}, {"mae", s.mae}, {"rmse", s.rmse}, {"pearson", s.pearson ? json(*s.pearson) : json(nullptr)}};
}

json table_json(const ComparisonTable& t) {
  json metrics = json::object();
  for (eval::Metric m : eval::kAllMetrics) {
    const auto it = t.metrics.find(m);
    metrics[std::string(eval::to_string(m))] = it == t.metrics.end() ? json(nullptr) : stats_json(it->second);
  }
  json overall = stats_json(t.overall);
  overall["pearson_metrics"] = t.pearson_metrics;
  return json{{"metrics", std::move(metrics)}, {"overall", std::move(overall)}, {"overall_pooled", stats_json(t.pooled)}};
}

}  // namespace

json to_json(const AgreementReport& r) {
  json judges = json::object();
  for (const auto& [name, s] : r.judges) {
    judges[name] = json{{"success_ok", s.success.ok},
                        {"success_total", s.success.total},
                        {"success_rate", s.success.fraction()},
                        {"success_percent", s.success.percent()},
                        {"imputed_trajectories", s.imputed_trajectories},
                        {"cronbach_alpha", s.cronbach_alpha ? json(*s.cronbach_alpha) : json(nullptr)}};
    if (!s.cronbach_note.empty()) judges[name]["cronbach_note"] = s.cronbach_note;
  }
  json out{{"evaluator", r.evaluator_id},
           {"reference", r.reference_id},
           {"seed", r.seed},
           {"cap", r.cap},
           {"imputed", r.imputed},
           {"imputed_count", r.imputed_count},
           {"judges", std::move(judges)},
           {"human_comparisons", r.human_comparisons},
           {"evaluator_vs_reference", table_json(r.evaluator_vs_reference)}};
  out["evaluator_vs_human"] = r.evaluator_vs_human ? table_json(*r.evaluator_vs_human) : json(nullptr);
  out["reference_vs_human"] = r.reference_vs_human ? table_json(*r.reference_vs_human) : json(nullptr);
  return out;
}

}  // namespace forge::agreement
