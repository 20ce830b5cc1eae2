#include "forge/demo/demo.hpp"

#include <map>
#include <memory>
#include <mutex>

#include "demo_data.hpp"
#include "forge/agreement/gaps.hpp"
#include "forge/annotation/store.hpp"
#include "forge/backend/scripted.hpp"
#include "forge/demo/simulator.hpp"
#include "forge/eval/trajectory.hpp"
#include "forge/pipeline/run.hpp"
#include "forge/pipeline/stages.hpp"
#include "forge/util/jsonl.hpp"
#include "forge/util/rng.hpp"

namespace forge::demo {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const std::vector<std::string> kAgents = {"agent-alpha", "agent-beta", "agent-gamma"};
constexpr int kAnnotators = 4;

json backend_blocks(bool simulated) {
  json blocks = json::object();
  auto add = [&](const std::string& name, json sim) {
    if (simulated) {
      sim["kind"] = "simulated";
      blocks[name] = sim;
    } else {
      blocks[name] = {{"kind", "scripted"}, {"script", "scripts/" + name + ".jsonl"}};
    }
  };
  add("writer", json::object());
  for (const auto& a : kAgents) add(a, json::object());
  add("judge-ref", json::object());
  add("judge-eval", {{"sloppiness", 0.12}, {"noise", 1}});
  return blocks;
}

json demo_config(std::uint64_t seed, bool simulated) {
  json cfg = {
      {"name", "demo"},
      {"seed", seed},
      {"workers", 2},
      {"inputs",
       {{"characters", "inputs/characters.jsonl"},
        {"images", "inputs/images.jsonl"},
        {"sources",
         {{{"name", "Ilse Varga"},
           {"series", "The Salt Road"},
           {"category", "Fictional"},
           {"language", "en"},
           {"split", "Train"},
           {"file", "inputs/sources/ilse_varga.txt"}}}},
        {"hypothetical", {{"count", 2}, {"series", "Hypothetical Real-Life"}, {"language", "en"}, {"split", "Train"}}}}},
      {"backends", backend_blocks(simulated)},
      {"generation",
       {{"backend", "writer"},
        {"simplify_max_chars", 700},
        {"summary_chunk_chars", 900},
        {"images_per_character", 2},
        {"turn_pairs", 3},
        {"in_test_fraction", 0.3}}},
      {"evaluation",
       {{"agents", kAgents},
        {"judges", {{{"name", "judge-ref"}, {"mode", "full"}}, {{"name", "judge-eval"}, {"mode", "per_metric"}}}},
        {"reference_judge", "judge-ref"},
        {"scale", {{"min", 1}, {"max", 10}}},
        {"commentary_chars", 400}}},
      {"reward_export", {{"judge", "judge-ref"}, {"holdout_questions", 3}, {"models_per_question", 2}}},
      {"agreement", {{"evaluator", "judge-eval"}, {"reference", "judge-ref"}, {"cap", 0.4}}},
  };
  if (simulated) {
    cfg["stages"] = {"characters", "dialogues", "filter", "convert", "stats", "evaluate", "score", "export_reward"};
  } else {
    cfg["agreement"]["human"] = "human.jsonl";
  }
  return cfg;
}

/// Shares one recorder per backend name across the per-stage contexts.
class Recorders {
 public:
  std::shared_ptr<backend::ChatBackend> get(const std::string& name, const json& block) {
    std::lock_guard lock(mutex_);
    auto& slot = recorders_[name];
    if (!slot) {
      SimulatedBackend::Options o;
      o.sloppiness = block.value("sloppiness", 0.0);
      o.noise = block.value("noise", 0);
      slot = std::make_shared<backend::RecordingBackend>(std::make_shared<SimulatedBackend>(o));
    }
    return slot;
  }

  std::size_t write(const fs::path& dir) {
    std::size_t total = 0;
    for (const auto& [name, rec] : recorders_) {
      rec->write_script(dir / (name + ".jsonl"));
      total += rec->size();
    }
    return total;
  }

 private:
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<backend::RecordingBackend>> recorders_;
};

/// Four annotators whose choices follow the reference judge's score gap,
/// each flipping towards "Equal" now and then.
std::vector<json> human_comparisons(const fs::path& run_dir, std::uint64_t seed) {
  const auto pairs = annotation::pairs_from_reward_rows(read_jsonl(run_dir / pipeline::kRewardValFile));
  std::map<std::tuple<std::string, std::string, eval::Metric>, double> ref;
  for (const auto& row : read_jsonl(run_dir / pipeline::kTrajectoriesFile)) {
    const auto t = eval::trajectory_from_json(row);
    if (t.judge_id != "judge-ref" || !t.ok()) continue;
    for (const auto& a : t.assessments) {
      ref[{t.sample_id, t.agent_id, a.metric}] = static_cast<double>(a.pair.evaluated) / a.pair.reference;
    }
  }
  std::vector<json> out;
  for (const auto& p : pairs) {
    for (const auto m : eval::kAllMetrics) {
      const double gap = ref.at({p.question_id, p.agent_a, m}) - ref.at({p.question_id, p.agent_b, m});
      agreement::HumanComparison c{p.question_id, m, p.agent_a, p.agent_b, {}};
      for (int i = 1; i <= kAnnotators; ++i) {
        const std::string annotator = "annotator-" + std::to_string(i);
        auto choice = gap > 0.05 ? agreement::Choice::Better
                      : gap < -0.05 ? agreement::Choice::Worse
                                    : agreement::Choice::Equal;
        KeyedRng rng(seed, "human/" + p.question_id + "/" + std::string(eval::to_string(m)) + "/" + annotator);
        if (rng.unit() < 0.2) choice = agreement::Choice::Equal;
        c.judgments.push_back({p.question_id, m, annotator, choice});
      }
      out.push_back(agreement::to_json(c));
    }
  }
  return out;
}

}  // namespace

DemoSummary write_demo(const fs::path& out, std::uint64_t seed) {
  fs::create_directories(out / "inputs" / "sources");
  fs::create_directories(out / "scripts");
  write_jsonl(out / "inputs" / "characters.jsonl", data::characters());
  write_jsonl(out / "inputs" / "images.jsonl", data::images());
  write_text_atomic(out / "inputs" / "sources" / "ilse_varga.txt", data::source_text() + "\n");

  auto recorders = std::make_shared<Recorders>();
  auto registry = std::make_shared<backend::BackendRegistry>();
  registry->register_kind("simulated", [recorders](const json& block, const backend::FactoryContext& ctx) {
    return recorders->get(ctx.name, block);
  });

  const fs::path build = out / ".build";
  fs::remove_all(build);
  const auto sim = pipeline::parse_config(demo_config(seed, true), fs::absolute(out));
  pipeline::RunOptions options;
  options.runs_dir = build;
  options.registry = registry;
  const auto outcome = pipeline::run_pipeline(sim, options);

  DemoSummary summary;
  const auto human = human_comparisons(outcome.run_dir, seed);
  write_jsonl(out / "human.jsonl", human);
  summary.human_comparisons = human.size();
  summary.script_entries = recorders->write(out / "scripts");
  fs::remove_all(build);

  summary.config = out / "config.json";
  write_json(summary.config, demo_config(seed, false));
  return summary;
}

}  // namespace forge::demo
