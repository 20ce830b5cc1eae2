#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "forge/agreement/gaps.hpp"
#include "forge/domain/corpus.hpp"
#include "forge/eval/metric.hpp"

namespace forge::annotation {

using json = nlohmann::json;

enum class TaskKind { PairCompare, ProfileReview, DialogueReview };
enum class TaskStatus { Open, Done };
enum class ReviewVerdict { Approve, Reject, Edit };

std::string_view to_string(TaskKind k);
std::string_view to_string(TaskStatus s);
std::string_view to_string(ReviewVerdict v);
ReviewVerdict parse_review_verdict(std::string_view s);

/// Which agent produced response_1 and response_2. Never leaves the server
/// except through export.
struct Blinding {
  std::string agent_1;
  std::string agent_2;
};

struct AnnotationTask {
  std::string id;
  TaskKind kind = TaskKind::PairCompare;
  /// What annotators see; holds no agent identities.
  json payload;
  std::optional<Blinding> blinding;
  /// PairCompare only.
  std::string question_id;
  std::optional<eval::Metric> metric;
  /// Reviews: the character or dialogue under review and its original text.
  std::string target_id;
  std::string original_text;
};

/// Server-side form, blinding included.
json to_json(const AnnotationTask& t);
AnnotationTask task_from_json(const json& j);

struct JudgmentRecord {
  std::string task_id;
  std::string annotator_id;
  /// Better/Equal/Worse for PairCompare (response_1 against response_2),
  /// Approve/Reject/Edit for reviews.
  std::string verdict;
  std::optional<std::string> patched_text;
  std::string timestamp;
};

json to_json(const JudgmentRecord& r);
JudgmentRecord judgment_from_json(const json& j);

/// One compared pair of responses for a question.
struct PairSource {
  std::string question_id;
  std::string agent_a;
  std::string agent_b;
};

struct TaskBuildOptions {
  std::uint64_t seed = 0;
  /// Show the corpus ground truth as a labelled reference.
  bool show_ground_truth = true;
  std::vector<eval::Metric> metrics{eval::kAllMetrics.begin(), eval::kAllMetrics.end()};
};

/// One PairCompare task per (pair, metric). Response order is drawn from
/// KeyedRng(seed, "blind/<question>/<metric>"). `responses` maps
/// (question, agent) to the agent's answer.
std::vector<AnnotationTask> build_pair_tasks(const std::vector<PairSource>& pairs,
                                             const std::map<std::pair<std::string, std::string>, std::string>& responses,
                                             const std::vector<TestSample>& samples, const Corpus& corpus,
                                             const TaskBuildOptions& options);

/// Every agent pair of each held-out question in reward_val rows, agents sorted.
std::vector<PairSource> pairs_from_reward_rows(const std::vector<json>& rows);

/// ProfileReview per character and DialogueReview per dialogue; `findings`
/// (filter report rows keyed by dialogue id) become highlighted spans.
std::vector<AnnotationTask> build_review_tasks(const Corpus& corpus, const std::map<std::string, json>& findings = {});

struct Registration {
  std::string annotator_id;
  std::string token;
};

struct ExportResult {
  std::vector<agreement::HumanComparison> comparisons;
  std::vector<json> reviews;
};

struct Progress {
  std::size_t tasks = 0;
  std::size_t open = 0;
  std::size_t done = 0;
  std::size_t judgments = 0;
  std::size_t annotators = 0;
};

/// Task queue and append-only judgment store. All members are thread-safe.
/// With a directory, judgments go to annotations.jsonl and registrations to
/// annotators.jsonl, and both are replayed on construction.
class AnnotationStore {
 public:
  AnnotationStore(std::vector<AnnotationTask> tasks, std::optional<std::filesystem::path> dir = std::nullopt,
                  std::size_t required_judgments = 4, std::uint64_t seed = 0);

  Registration register_annotator(const std::string& name);
  /// Annotator id for a bearer token.
  std::optional<std::string> authenticate(const std::string& token) const;
  bool is_registered(const std::string& annotator_id) const;

  /// The task this annotator fetched but has not judged, or the next Open
  /// task they have not judged, cycling through metrics. nullopt when none
  /// remain.
  std::optional<AnnotationTask> next_task(const std::string& annotator_id);

  /// UnknownTask, DuplicateJudgment, Unauthorized (unregistered annotator)
  /// or InvalidArgument (verdict does not fit the task kind).
  void submit(JudgmentRecord record);

  ExportResult export_judgments() const;
  Progress progress() const;
  std::vector<JudgmentRecord> judgments() const;
  const std::vector<AnnotationTask>& tasks() const { return tasks_; }

  /// The payload served over HTTP.
  static json public_view(const AnnotationTask& task);

 private:
  void apply(const JudgmentRecord& record);
  void validate(const JudgmentRecord& record) const;

  std::vector<AnnotationTask> tasks_;
  std::map<std::string, std::size_t> task_index_;
  std::optional<std::filesystem::path> dir_;
  std::size_t required_;
  std::uint64_t seed_;

  mutable std::mutex mutex_;
  std::vector<JudgmentRecord> records_;
  std::set<std::pair<std::string, std::string>> judged_;  // (task, annotator)
  std::vector<std::size_t> counts_;                        // judgments per task
  std::map<std::string, std::string> annotators_;          // id -> token digest
  std::map<std::string, std::string> by_token_;            // token digest -> id
  std::map<std::string, std::string> pending_;             // annotator -> task id
  std::map<std::string, std::size_t> cursor_;              // annotator -> metric slot
  /// Task indices per queue slot (one slot per metric, then reviews), in seeded order.
  std::vector<std::vector<std::size_t>> queues_;
  std::ofstream annotations_out_;
};

}  // namespace forge::annotation
