#include "forge/eval/trajectory.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "forge/util/error.hpp"
#include "forge/util/text.hpp"

namespace forge::eval {

std::string_view to_string(ParseOutcome o) { return o == ParseOutcome::Ok ? "Ok" : "Failed"; }

std::string_view to_string(ParseMode m) {
  switch (m) {
    case ParseMode::Strict: return "strict";
    case ParseMode::Lenient: return "lenient";
    case ParseMode::None: return "none";
  }
  return "none";
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string cap_commentary(std::string_view s, std::size_t cap) {
  return std::string(text::prefix_chars(text::trim(s), cap));
}

bool in_scale(int v, const ScoreScale& scale) { return v >= scale.min && v <= scale.max; }

// ---- strict --------------------------------------------------------------

std::optional<Metric> strict_label(std::string_view line, std::size_t& rest) {
  for (Metric m : kAllMetrics) {
    const auto abbrev = to_string(m);
    if (line.size() > abbrev.size() && line.substr(0, abbrev.size()) == abbrev && line[abbrev.size()] == ':') {
      rest = abbrev.size() + 1;
      return m;
    }
  }
  return std::nullopt;
}

/// "<commentary> Scores: a b" with nothing after b.
bool strict_block(std::string_view body, const ParseOptions& opt, MetricAssessment& out, std::string& why) {
  const auto key = body.rfind("Scores:");
  if (key == std::string_view::npos) {
    why = "no 'Scores:'";
    return false;
  }
  const auto commentary = text::trim(body.substr(0, key));
  if (commentary.empty()) {
    why = "empty commentary";
    return false;
  }
  std::string_view tail = body.substr(key + 7);
  int values[2];
  for (int& v : values) {
    std::size_t i = 0;
    while (i < tail.size() && is_space(tail[i])) ++i;
    const std::size_t start = i;
    while (i < tail.size() && is_digit(tail[i])) ++i;
    if (i == start || i - start > 3) {
      why = "scores are not two integers";
      return false;
    }
    v = std::stoi(std::string(tail.substr(start, i - start)));
    tail = tail.substr(i);
  }
  if (!text::trim(tail).empty()) {
    why = "text after scores";
    return false;
  }
  if (!in_scale(values[0], opt.scale) || !in_scale(values[1], opt.scale)) {
    why = "score out of range";
    return false;
  }
  out.commentary = cap_commentary(commentary, opt.commentary_chars);
  out.pair = {values[0], values[1]};
  return true;
}

bool parse_strict(const std::string& raw, const ParseOptions& opt, std::vector<MetricAssessment>& out,
                  std::string& why) {
  struct Block {
    Metric metric;
    std::string body;
  };
  std::vector<Block> blocks;
  for (const auto& line : text::split_lines(raw)) {
    const auto t = text::trim(line);
    if (t.empty()) continue;
    std::size_t rest = 0;
    if (auto m = strict_label(t, rest)) {
      blocks.push_back({*m, std::string(t.substr(rest))});
    } else if (blocks.empty()) {
      why = "text before the first metric";
      return false;
    } else {
      blocks.back().body += " ";
      blocks.back().body += t;
    }
  }
  if (blocks.size() != opt.metrics.size()) {
    why = "expected " + std::to_string(opt.metrics.size()) + " blocks, found " + std::to_string(blocks.size());
    return false;
  }
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].metric != opt.metrics[i]) {
      why = "block " + std::to_string(i + 1) + " is " + std::string(to_string(blocks[i].metric)) + ", expected " +
            std::string(to_string(opt.metrics[i]));
      return false;
    }
    MetricAssessment a;
    a.metric = blocks[i].metric;
    if (!strict_block(blocks[i].body, opt, a, why)) {
      why = std::string(to_string(a.metric)) + ": " + why;
      return false;
    }
    out.push_back(std::move(a));
  }
  return true;
}

// ---- lenient -------------------------------------------------------------

struct Label {
  Metric metric;
  std::size_t start;  // offset of the label in the text
  std::size_t body;   // offset where the segment body begins
};

bool istarts(std::string_view s, std::string_view prefix) {
  if (s.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    char a = s[i], b = prefix[i];
    if (a >= 'A' && a <= 'Z') a = static_cast<char>(a - 'A' + 'a');
    if (b >= 'A' && b <= 'Z') b = static_cast<char>(b - 'A' + 'a');
    if (a != b) return false;
  }
  return true;
}

std::size_t skip_decoration(std::string_view s, std::size_t i) {
  for (;;) {
    while (i < s.size() && (is_space(s[i]) || s[i] == '#' || s[i] == '*' || s[i] == '-' || s[i] == '>' ||
                            s[i] == '_' || s[i] == '|')) {
      ++i;
    }
    if (s.substr(i, 3) == "\xE2\x80\xA2") {  // bullet
      i += 3;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && is_digit(s[j])) ++j;
    if (j > i && j < s.size() && (s[j] == '.' || s[j] == ')')) {
      i = j + 1;
      continue;
    }
    return i;
  }
}

/// Metric label at `line[pos]`, followed by decoration and a separator or end of line.
std::optional<std::pair<Metric, std::size_t>> lenient_label(std::string_view line, std::size_t pos) {
  struct Candidate {
    std::string_view name;
    Metric metric;
  };
  std::vector<Candidate> names;
  for (Metric m : kAllMetrics) {
    names.push_back({full_name(m), m});
    names.push_back({to_string(m), m});
  }
  names.push_back({"Image Text Relevance", Metric::ITR});
  names.push_back({"Coherence", Metric::Coh});
  std::stable_sort(names.begin(), names.end(),
                   [](const Candidate& a, const Candidate& b) { return a.name.size() > b.name.size(); });
  const auto rest = line.substr(pos);
  for (const auto& c : names) {
    if (!istarts(rest, c.name)) continue;
    std::size_t i = c.name.size();
    if (i < rest.size() && std::isalnum(static_cast<unsigned char>(rest[i]))) continue;
    while (i < rest.size() && (rest[i] == '*' || rest[i] == '_' || rest[i] == ' ')) ++i;
    if (i < rest.size() && rest[i] == '(') {
      const auto close = rest.find(')', i);
      if (close != std::string_view::npos && close - i <= 8) i = close + 1;
      while (i < rest.size() && (rest[i] == '*' || rest[i] == '_' || rest[i] == ' ')) ++i;
    }
    if (i >= rest.size()) return std::make_pair(c.metric, pos + i);
    if (rest[i] == ':' || rest[i] == '-') return std::make_pair(c.metric, pos + i + 1);
    if (rest.substr(i, 3) == "\xEF\xBC\x9A" || rest.substr(i, 3) == "\xE2\x80\x93") {  // fullwidth colon, en dash
      return std::make_pair(c.metric, pos + i + 3);
    }
  }
  return std::nullopt;
}

std::vector<Label> find_labels(const std::string& raw) {
  std::vector<Label> labels;
  std::size_t line_start = 0;
  while (line_start <= raw.size()) {
    auto line_end = raw.find('\n', line_start);
    if (line_end == std::string::npos) line_end = raw.size();
    const std::string_view line(raw.data() + line_start, line_end - line_start);
    const auto pos = skip_decoration(line, 0);
    if (auto hit = lenient_label(line, pos)) {
      labels.push_back({hit->first, line_start, line_start + hit->second});
    }
    line_start = line_end + 1;
  }
  return labels;
}

bool preceded_by_word(std::string_view s, std::size_t pos, std::string_view word) {
  std::size_t i = pos;
  while (i > 0 && s[i - 1] == ' ') --i;
  return i >= word.size() && istarts(s.substr(i - word.size()), word);
}

/// Integers in [min, max], skipping denominators ("8/10"), decimals and
/// response numbering ("Response 2").
std::vector<int> scale_integers(std::string_view s, const ScoreScale& scale) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (!is_digit(s[i])) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < s.size() && is_digit(s[i])) ++i;
    const bool denominator = start > 0 && s[start - 1] == '/';
    const bool decimal = (i + 1 < s.size() && s[i] == '.' && is_digit(s[i + 1])) ||
                         (start >= 2 && s[start - 1] == '.' && is_digit(s[start - 2]));
    const bool numbering = preceded_by_word(s, start, "response") || preceded_by_word(s, start, "answer") ||
                           preceded_by_word(s, start, "assistant");
    if (denominator || decimal || numbering || i - start > 3) continue;
    const int v = std::stoi(std::string(s.substr(start, i - start)));
    if (in_scale(v, scale)) out.push_back(v);
  }
  return out;
}

std::string_view strip_edges(std::string_view s) {
  auto junk = [](char c) { return is_space(c) || c == '*' || c == '_' || c == ':' || c == '-' || c == '(' || c == '['; };
  while (!s.empty() && junk(s.front())) s.remove_prefix(1);
  while (!s.empty() && junk(s.back())) s.remove_suffix(1);
  return s;
}

bool parse_lenient(const std::string& raw, const ParseOptions& opt, std::vector<MetricAssessment>& out,
                   std::string& why) {
  const auto labels = find_labels(raw);
  std::vector<std::optional<MetricAssessment>> found(kAllMetrics.size());
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const auto& label = labels[k];
    if (found[metric_index(label.metric)]) continue;
    const std::size_t end = k + 1 < labels.size() ? labels[k + 1].start : raw.size();
    const std::string_view seg(raw.data() + label.body, end - label.body);
    const auto key = text::ifind(seg, "score");
    std::string_view commentary_part = seg;
    std::string_view score_part = seg;
    if (key != std::string_view::npos) {
      commentary_part = seg.substr(0, key);
      score_part = seg.substr(key);
    }
    const auto ints = scale_integers(score_part, opt.scale);
    if (ints.size() < 2) continue;
    if (key == std::string_view::npos) {
      // no keyword: commentary is the text before the first number
      std::size_t first = 0;
      while (first < seg.size() && !is_digit(seg[first])) ++first;
      commentary_part = seg.substr(0, first);
    }
    const auto commentary = strip_edges(commentary_part);
    if (commentary.empty()) continue;
    MetricAssessment a;
    a.metric = label.metric;
    a.commentary = text::tidy_spacing(cap_commentary(commentary, opt.commentary_chars));
    std::replace(a.commentary.begin(), a.commentary.end(), '\n', ' ');
    a.pair = {ints[0], ints[1]};
    found[metric_index(label.metric)] = std::move(a);
  }
  for (Metric m : opt.metrics) {
    if (!found[metric_index(m)]) {
      why = "no usable assessment for " + std::string(to_string(m));
      return false;
    }
    out.push_back(*found[metric_index(m)]);
  }
  return true;
}

}  // namespace

ParseResult parse_assessments(const std::string& raw, const ParseOptions& options) {
  ParseResult result;
  if (options.metrics.empty()) {
    result.failure = "no metrics requested";
    return result;
  }
  std::string strict_why;
  std::vector<MetricAssessment> assessments;
  if (parse_strict(raw, options, assessments, strict_why)) {
    result.outcome = ParseOutcome::Ok;
    result.mode = ParseMode::Strict;
    result.assessments = std::move(assessments);
    return result;
  }
  assessments.clear();
  std::string lenient_why;
  if (parse_lenient(raw, options, assessments, lenient_why)) {
    result.outcome = ParseOutcome::Ok;
    result.mode = ParseMode::Lenient;
    result.assessments = std::move(assessments);
    return result;
  }
  result.failure = "strict: " + strict_why + "; lenient: " + lenient_why;
  return result;
}

EvaluationTrajectory parse_trajectory(const std::string& raw, const ParseOptions& options) {
  return make_trajectory("", "", "", "", raw, options);
}

EvaluationTrajectory make_trajectory(std::string sample_id, std::string agent_id, std::string judge_id,
                                     std::string agent_response, std::string raw, const ParseOptions& options) {
  EvaluationTrajectory t;
  t.sample_id = std::move(sample_id);
  t.agent_id = std::move(agent_id);
  t.judge_id = std::move(judge_id);
  t.agent_response = std::move(agent_response);
  t.raw = std::move(raw);
  auto parsed = parse_assessments(t.raw, options);
  t.parse_outcome = parsed.outcome;
  t.parse_mode = parsed.mode;
  t.assessments = std::move(parsed.assessments);
  t.failure = std::move(parsed.failure);
  return t;
}

EvaluationTrajectory reparse(const EvaluationTrajectory& t, const ParseOptions& options) {
  return make_trajectory(t.sample_id, t.agent_id, t.judge_id, t.agent_response, t.raw, options);
}

json to_json(const EvaluationTrajectory& t) {
  json assessments = json::array();
  for (const auto& a : t.assessments) {
    assessments.push_back(json{{"metric", to_string(a.metric)},
                               {"commentary", a.commentary},
                               {"scores", {a.pair.evaluated, a.pair.reference}}});
  }
  return json{{"sample_id", t.sample_id},
              {"agent_id", t.agent_id},
              {"judge_id", t.judge_id},
              {"agent_response", t.agent_response},
              {"raw", t.raw},
              {"assessments", std::move(assessments)},
              {"parse_outcome", to_string(t.parse_outcome)},
              {"parse_mode", to_string(t.parse_mode)},
              {"failure", t.failure}};
}

EvaluationTrajectory trajectory_from_json(const json& j) {
  try {
    EvaluationTrajectory t;
    t.sample_id = j.at("sample_id").get<std::string>();
    t.agent_id = j.at("agent_id").get<std::string>();
    t.judge_id = j.at("judge_id").get<std::string>();
    t.agent_response = j.at("agent_response").get<std::string>();
    t.raw = j.at("raw").get<std::string>();
    for (const auto& a : j.at("assessments")) {
      t.assessments.push_back(MetricAssessment{parse_metric(a.at("metric").get<std::string>()),
                                               a.at("commentary").get<std::string>(),
                                               {a.at("scores").at(0).get<int>(), a.at("scores").at(1).get<int>()}});
    }
    const auto outcome = j.at("parse_outcome").get<std::string>();
    if (outcome != "Ok" && outcome != "Failed") throw Error(Errc::SchemaError, "bad parse_outcome " + outcome);
    t.parse_outcome = outcome == "Ok" ? ParseOutcome::Ok : ParseOutcome::Failed;
    const auto mode = j.at("parse_mode").get<std::string>();
    t.parse_mode = mode == "strict" ? ParseMode::Strict : mode == "lenient" ? ParseMode::Lenient : ParseMode::None;
    t.failure = j.at("failure").get<std::string>();
    return t;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaError, std::string("EvaluationTrajectory: ") + e.what());
  }
}

std::vector<MetricSample> segment_trajectory(const EvaluationTrajectory& t, const ScoreScale& scale) {
  if (!t.ok()) {
    throw Error(Errc::NotParsed, "trajectory for sample " + t.sample_id + " / agent " + t.agent_id + " failed to parse");
  }
  std::vector<MetricSample> out;
  out.reserve(t.assessments.size());
  for (const auto& a : t.assessments) {
    out.push_back(MetricSample{t.sample_id, t.agent_id, t.judge_id, a.metric, a.commentary, a.pair,
                               quantify(a.pair, scale)});
  }
  return out;
}

std::string format_assessment(const MetricAssessment& a) {
  return std::string(to_string(a.metric)) + ": " + a.commentary + " Scores: " + std::to_string(a.pair.evaluated) +
         " " + std::to_string(a.pair.reference);
}

}  // namespace forge::eval
