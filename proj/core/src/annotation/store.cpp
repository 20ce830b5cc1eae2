#include "forge/annotation/store.hpp"

#include <openssl/rand.h>

#include <algorithm>
#include <cstdio>

#include "forge/domain/ids.hpp"
#include "forge/eval/templates.hpp"
#include "forge/util/error.hpp"
#include "forge/util/hash.hpp"
#include "forge/util/jsonl.hpp"
#include "forge/util/rng.hpp"

namespace forge::annotation {

namespace fs = std::filesystem;

namespace {

constexpr const char* kAnnotationsFile = "annotations.jsonl";
constexpr const char* kAnnotatorsFile = "annotators.jsonl";
constexpr std::size_t kReviewSlot = eval::kAllMetrics.size();

std::string random_token() {
  unsigned char bytes[24];
  if (RAND_bytes(bytes, sizeof bytes) != 1) throw Error(Errc::IoError, "no entropy for token generation");
  std::string out;
  char buf[3];
  for (unsigned char b : bytes) {
    std::snprintf(buf, sizeof buf, "%02x", b);
    out += buf;
  }
  return out;
}

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json turns_json(const std::vector<Turn>& turns, const std::map<std::string, std::string>& names) {
  json out = json::array();
  for (const auto& t : turns) {
    const auto it = names.find(t.speaker.str());
    out.push_back({{"index", t.index},
                   {"speaker", t.speaker.is_human() ? "Human" : (it != names.end() ? it->second : t.speaker.str())},
                   {"text", t.text}});
  }
  return out;
}

bool is_choice(std::string_view v) { return v == "Better" || v == "Equal" || v == "Worse"; }

}  // namespace

std::string_view to_string(TaskKind k) {
  switch (k) {
    case TaskKind::PairCompare: return "PairCompare";
    case TaskKind::ProfileReview: return "ProfileReview";
    case TaskKind::DialogueReview: return "DialogueReview";
  }
  return "PairCompare";
}

std::string_view to_string(TaskStatus s) { return s == TaskStatus::Open ? "Open" : "Done"; }

std::string_view to_string(ReviewVerdict v) {
  switch (v) {
    case ReviewVerdict::Approve: return "Approve";
    case ReviewVerdict::Reject: return "Reject";
    case ReviewVerdict::Edit: return "Edit";
  }
  return "Approve";
}

ReviewVerdict parse_review_verdict(std::string_view s) {
  if (s == "Approve") return ReviewVerdict::Approve;
  if (s == "Reject") return ReviewVerdict::Reject;
  if (s == "Edit") return ReviewVerdict::Edit;
  throw Error(Errc::InvalidArgument, "unknown review verdict '" + std::string(s) + "'");
}

TaskKind parse_task_kind(std::string_view s) {
  if (s == "PairCompare") return TaskKind::PairCompare;
  if (s == "ProfileReview") return TaskKind::ProfileReview;
  if (s == "DialogueReview") return TaskKind::DialogueReview;
  throw Error(Errc::SchemaError, "unknown task kind '" + std::string(s) + "'");
}

json to_json(const AnnotationTask& t) {
  json j = {{"id", t.id},
            {"kind", to_string(t.kind)},
            {"payload", t.payload},
            {"question_id", t.question_id},
            {"target_id", t.target_id},
            {"original_text", t.original_text}};
  if (t.metric) j["metric"] = eval::to_string(*t.metric);
  if (t.blinding) j["blinding"] = {{"agent_1", t.blinding->agent_1}, {"agent_2", t.blinding->agent_2}};
  return j;
}

AnnotationTask task_from_json(const json& j) {
  try {
    AnnotationTask t;
    t.id = j.at("id").get<std::string>();
    t.kind = parse_task_kind(j.at("kind").get<std::string>());
    t.payload = j.at("payload");
    t.question_id = j.value("question_id", std::string());
    t.target_id = j.value("target_id", std::string());
    t.original_text = j.value("original_text", std::string());
    if (j.contains("metric")) t.metric = eval::parse_metric(j.at("metric").get<std::string>());
    if (j.contains("blinding")) {
      t.blinding = Blinding{j.at("blinding").at("agent_1").get<std::string>(),
                            j.at("blinding").at("agent_2").get<std::string>()};
    }
    if (t.kind == TaskKind::PairCompare && (!t.metric || !t.blinding)) {
      throw Error(Errc::SchemaError, "pair task " + t.id + " lacks metric or blinding");
    }
    return t;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaError, std::string("bad task: ") + e.what());
  }
}

json to_json(const JudgmentRecord& r) {
  json j = {{"task_id", r.task_id}, {"annotator_id", r.annotator_id}, {"verdict", r.verdict}, {"timestamp", r.timestamp}};
  if (r.patched_text) j["patched_text"] = *r.patched_text;
  return j;
}

JudgmentRecord judgment_from_json(const json& j) {
  try {
    JudgmentRecord r;
    r.task_id = j.at("task_id").get<std::string>();
    r.annotator_id = j.value("annotator_id", std::string());
    r.verdict = j.at("verdict").get<std::string>();
    if (j.contains("patched_text") && !j.at("patched_text").is_null()) r.patched_text = j.at("patched_text").get<std::string>();
    r.timestamp = j.value("timestamp", std::string());
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaError, std::string("bad judgment: ") + e.what());
  }
}

// ------------------------------------------------------------------ building

std::vector<AnnotationTask> build_pair_tasks(const std::vector<PairSource>& pairs,
                                             const std::map<std::pair<std::string, std::string>, std::string>& responses,
                                             const std::vector<TestSample>& samples, const Corpus& corpus,
                                             const TaskBuildOptions& options) {
  std::map<std::string, const TestSample*> by_id;
  for (const auto& s : samples) by_id[s.id] = &s;
  auto response_of = [&](const std::string& q, const std::string& agent) -> const std::string& {
    const auto it = responses.find({q, agent});
    if (it == responses.end()) throw Error(Errc::InsufficientData, "no response from " + agent + " for " + q);
    return it->second;
  };

  std::vector<AnnotationTask> tasks;
  for (const auto& pair : pairs) {
    const auto sit = by_id.find(pair.question_id);
    if (sit == by_id.end()) throw Error(Errc::InsufficientData, "unknown question " + pair.question_id);
    const TestSample& sample = *sit->second;
    const auto ctx = eval::resolve_context(sample.dialogue_id, sample.target_turn_index, corpus);
    for (const auto metric : options.metrics) {
      const std::string m(eval::to_string(metric));
      Blinding blind{pair.agent_a, pair.agent_b};
      if (KeyedRng(options.seed, "blind/" + pair.question_id + "/" + m).below(2) == 1) {
        std::swap(blind.agent_1, blind.agent_2);
      }
      AnnotationTask t;
      t.kind = TaskKind::PairCompare;
      t.question_id = pair.question_id;
      t.metric = metric;
      t.id = content_id("task", json{{"kind", "PairCompare"},
                                     {"question", pair.question_id},
                                     {"metric", m},
                                     {"agents", json::array({pair.agent_a, pair.agent_b})}});
      json p = {{"task_id", t.id},
                {"kind", "PairCompare"},
                {"question_id", pair.question_id},
                {"metric", m},
                {"metric_name", eval::full_name(metric)},
                {"metric_definition", eval::definition(metric)},
                {"image_uri", ctx.image ? ctx.image->uri : ""},
                {"role_name", ctx.role ? ctx.role->name : ""},
                {"profile", ctx.role ? prompt_profile_text(ctx.role->profile) : ""},
                {"context", turns_json(ctx.history, ctx.names)},
                {"response_1", response_of(pair.question_id, blind.agent_1)},
                {"response_2", response_of(pair.question_id, blind.agent_2)}};
      if (ctx.other) {
        p["other_role_name"] = ctx.other->name;
        p["other_profile"] = prompt_profile_text(ctx.other->profile);
      }
      if (options.show_ground_truth) p["ground_truth"] = sample.ground_truth;
      t.payload = std::move(p);
      t.blinding = blind;
      tasks.push_back(std::move(t));
    }
  }
  return tasks;
}

std::vector<PairSource> pairs_from_reward_rows(const std::vector<json>& rows) {
  std::map<std::string, std::set<std::string>> agents;
  for (const auto& r : rows) agents[r.at("sample_id").get<std::string>()].insert(r.at("agent_id").get<std::string>());
  std::vector<PairSource> out;
  for (const auto& [q, set] : agents) {
    const std::vector<std::string> list(set.begin(), set.end());
    for (std::size_t i = 0; i < list.size(); ++i) {
      for (std::size_t j = i + 1; j < list.size(); ++j) out.push_back({q, list[i], list[j]});
    }
  }
  return out;
}

std::vector<AnnotationTask> build_review_tasks(const Corpus& corpus, const std::map<std::string, json>& findings) {
  std::vector<AnnotationTask> tasks;
  for (const auto& c : corpus.characters()) {
    AnnotationTask t;
    t.kind = TaskKind::ProfileReview;
    t.target_id = c.id;
    t.original_text = render_profile(c.profile);
    t.id = content_id("task", json{{"kind", "ProfileReview"}, {"target", c.id}});
    t.payload = {{"task_id", t.id}, {"kind", "ProfileReview"}, {"target_id", c.id}, {"name", c.name},
                 {"series", c.series}, {"text", t.original_text}};
    tasks.push_back(std::move(t));
  }
  for (const auto& d : corpus.dialogues()) {
    std::map<std::string, std::string> names;
    std::vector<std::string> lines;
    for (const auto& ch : corpus.characters()) names[ch.id] = ch.name;
    const json turns = turns_json(d.turns, names);
    for (const auto& t : turns) lines.push_back(t.at("speaker").get<std::string>() + ": " + t.at("text").get<std::string>());
    AnnotationTask t;
    t.kind = TaskKind::DialogueReview;
    t.target_id = d.id;
    for (const auto& l : lines) t.original_text += l + "\n";
    t.id = content_id("task", json{{"kind", "DialogueReview"}, {"target", d.id}});
    const auto* img = corpus.image(d.image);
    t.payload = {{"task_id", t.id},        {"kind", "DialogueReview"}, {"target_id", d.id},
                 {"scenario", to_string(d.scenario)}, {"image_uri", img ? img->uri : ""}, {"turns", turns},
                 {"text", t.original_text}, {"highlights", json::array()}};
    if (const auto it = findings.find(d.id); it != findings.end() && it->second.contains("findings")) {
      t.payload["highlights"] = it->second.at("findings");
    }
    tasks.push_back(std::move(t));
  }
  return tasks;
}

// --------------------------------------------------------------------- store

AnnotationStore::AnnotationStore(std::vector<AnnotationTask> tasks, std::optional<fs::path> dir,
                                 std::size_t required_judgments, std::uint64_t seed)
    : tasks_(std::move(tasks)), dir_(std::move(dir)), required_(std::max<std::size_t>(1, required_judgments)), seed_(seed) {
  counts_.assign(tasks_.size(), 0);
  queues_.assign(kReviewSlot + 1, {});
  for (std::size_t i = 0; i < tasks_.size(); ++i) {
    if (!task_index_.emplace(tasks_[i].id, i).second) {
      throw Error(Errc::InvalidArgument, "duplicate task id " + tasks_[i].id);
    }
    const std::size_t slot = tasks_[i].metric ? eval::metric_index(*tasks_[i].metric) : kReviewSlot;
    queues_[slot].push_back(i);
  }
  for (std::size_t s = 0; s < queues_.size(); ++s) KeyedRng(seed_, "order/" + std::to_string(s)).shuffle(queues_[s]);

  if (!dir_) return;
  fs::create_directories(*dir_);
  if (fs::exists(*dir_ / kAnnotatorsFile)) {
    for (const auto& row : read_jsonl(*dir_ / kAnnotatorsFile)) {
      const auto id = row.at("annotator_id").get<std::string>();
      const auto digest = row.at("token_sha256").get<std::string>();
      annotators_[id] = digest;
      by_token_[digest] = id;
    }
  }
  if (fs::exists(*dir_ / kAnnotationsFile)) {
    for (const auto& row : read_jsonl(*dir_ / kAnnotationsFile)) {
      const auto r = judgment_from_json(row);
      validate(r);
      apply(r);
    }
  }
  annotations_out_.open(*dir_ / kAnnotationsFile, std::ios::app | std::ios::binary);
  if (!annotations_out_) throw Error(Errc::IoError, "cannot open " + (*dir_ / kAnnotationsFile).string());
}

Registration AnnotationStore::register_annotator(const std::string& name) {
  std::lock_guard lock(mutex_);
  char id[32];
  std::snprintf(id, sizeof id, "ann-%03zu", annotators_.size() + 1);
  Registration reg{id, random_token()};
  const auto digest = sha256_hex(reg.token);
  annotators_[reg.annotator_id] = digest;
  by_token_[digest] = reg.annotator_id;
  if (dir_) {
    std::ofstream out(*dir_ / kAnnotatorsFile, std::ios::app | std::ios::binary);
    out << canonical_dump(json{{"annotator_id", reg.annotator_id}, {"name", name}, {"token_sha256", digest}}) << '\n';
    if (!out) throw Error(Errc::IoError, "cannot persist annotator");
  }
  return reg;
}

std::optional<std::string> AnnotationStore::authenticate(const std::string& token) const {
  std::lock_guard lock(mutex_);
  const auto it = by_token_.find(sha256_hex(token));
  if (it == by_token_.end()) return std::nullopt;
  return it->second;
}

bool AnnotationStore::is_registered(const std::string& annotator_id) const {
  std::lock_guard lock(mutex_);
  return annotators_.count(annotator_id) > 0;
}

std::optional<AnnotationTask> AnnotationStore::next_task(const std::string& annotator_id) {
  std::lock_guard lock(mutex_);
  if (!annotators_.count(annotator_id)) throw Error(Errc::Unauthorized, "annotator " + annotator_id + " is not registered");
  auto available = [&](std::size_t i) {
    return counts_[i] < required_ && !judged_.count({tasks_[i].id, annotator_id});
  };
  if (const auto it = pending_.find(annotator_id); it != pending_.end()) {
    const auto idx = task_index_.at(it->second);
    if (available(idx)) return tasks_[idx];
    pending_.erase(it);
  }
  const std::size_t slots = queues_.size();
  const std::size_t start = cursor_[annotator_id];
  for (std::size_t k = 0; k < slots; ++k) {
    const std::size_t slot = (start + k) % slots;
    for (const auto idx : queues_[slot]) {
      if (!available(idx)) continue;
      cursor_[annotator_id] = (slot + 1) % slots;
      pending_[annotator_id] = tasks_[idx].id;
      return tasks_[idx];
    }
  }
  return std::nullopt;
}

void AnnotationStore::validate(const JudgmentRecord& r) const {
  const auto it = task_index_.find(r.task_id);
  if (it == task_index_.end()) throw Error(Errc::UnknownTask, "unknown task " + r.task_id);
  if (!annotators_.count(r.annotator_id)) throw Error(Errc::Unauthorized, "annotator " + r.annotator_id + " is not registered");
  if (judged_.count({r.task_id, r.annotator_id})) {
    throw Error(Errc::DuplicateJudgment, r.annotator_id + " already judged " + r.task_id);
  }
  const auto& task = tasks_[it->second];
  if (task.kind == TaskKind::PairCompare) {
    if (!is_choice(r.verdict)) throw Error(Errc::InvalidArgument, "pair comparisons take Better, Equal or Worse");
    if (r.patched_text) throw Error(Errc::InvalidArgument, "pair comparisons take no patched text");
  } else {
    const auto v = parse_review_verdict(r.verdict);
    const bool has_patch = r.patched_text && !r.patched_text->empty();
    if (v == ReviewVerdict::Edit && !has_patch) throw Error(Errc::InvalidArgument, "Edit needs non-empty patched text");
    if (v != ReviewVerdict::Edit && r.patched_text) throw Error(Errc::InvalidArgument, "only Edit carries patched text");
  }
}

void AnnotationStore::apply(const JudgmentRecord& r) {
  judged_.insert({r.task_id, r.annotator_id});
  ++counts_[task_index_.at(r.task_id)];
  records_.push_back(r);
  if (const auto it = pending_.find(r.annotator_id); it != pending_.end() && it->second == r.task_id) pending_.erase(it);
}

void AnnotationStore::submit(JudgmentRecord record) {
  std::lock_guard lock(mutex_);
  validate(record);
  if (record.timestamp.empty()) record.timestamp = now_utc();
  if (annotations_out_.is_open()) {
    annotations_out_ << canonical_dump(to_json(record)) << '\n';
    annotations_out_.flush();
    if (!annotations_out_) throw Error(Errc::IoError, "cannot persist judgment");
  }
  apply(record);
}

ExportResult AnnotationStore::export_judgments() const {
  std::lock_guard lock(mutex_);
  std::map<std::size_t, std::vector<const JudgmentRecord*>> by_task;
  for (const auto& r : records_) by_task[task_index_.at(r.task_id)].push_back(&r);

  ExportResult out;
  for (auto& [idx, recs] : by_task) {
    const auto& task = tasks_[idx];
    std::sort(recs.begin(), recs.end(),
              [](const JudgmentRecord* a, const JudgmentRecord* b) { return a->annotator_id < b->annotator_id; });
    if (task.kind == TaskKind::PairCompare) {
      const auto& blind = *task.blinding;
      agreement::HumanComparison c;
      c.question_id = task.question_id;
      c.metric = *task.metric;
      c.agent_a = std::min(blind.agent_1, blind.agent_2);
      c.agent_b = std::max(blind.agent_1, blind.agent_2);
      const bool flipped = c.agent_a != blind.agent_1;
      for (const auto* r : recs) {
        const auto choice = agreement::parse_choice(r->verdict);
        c.judgments.push_back({c.question_id, c.metric, r->annotator_id, flipped ? agreement::invert(choice) : choice});
      }
      out.comparisons.push_back(std::move(c));
    } else {
      for (const auto* r : recs) {
        json row = {{"task_id", task.id},
                    {"kind", to_string(task.kind)},
                    {"target_id", task.target_id},
                    {"annotator_id", r->annotator_id},
                    {"verdict", r->verdict},
                    {"original_text", task.original_text}};
        if (r->patched_text) row["patched_text"] = *r->patched_text;
        out.reviews.push_back(std::move(row));
      }
    }
  }
  return out;
}

Progress AnnotationStore::progress() const {
  std::lock_guard lock(mutex_);
  Progress p;
  p.tasks = tasks_.size();
  for (const auto c : counts_) (c >= required_ ? p.done : p.open) += 1;
  p.judgments = records_.size();
  p.annotators = annotators_.size();
  return p;
}

std::vector<JudgmentRecord> AnnotationStore::judgments() const {
  std::lock_guard lock(mutex_);
  return records_;
}

json AnnotationStore::public_view(const AnnotationTask& task) { return task.payload; }

}  // namespace forge::annotation
