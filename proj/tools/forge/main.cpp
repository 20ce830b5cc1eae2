// forge: command-line front end for the corpus and evaluation pipeline.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "forge/annotation/server.hpp"
#include "forge/annotation/store.hpp"
#include "forge/dataset/conversion.hpp"
#include "forge/dataset/stats.hpp"
#include "forge/demo/demo.hpp"
#include "forge/domain/corpus.hpp"
#include "forge/domain/validation.hpp"
#include "forge/eval/trajectory.hpp"
#include "forge/pipeline/run.hpp"
#include "forge/pipeline/stages.hpp"
#include "forge/pipeline/validate.hpp"
#include "forge/util/error.hpp"
#include "forge/util/jsonl.hpp"

namespace fs = std::filesystem;
using forge::json;

namespace {

constexpr int kExitError = 1;
constexpr int kExitStructure = 3;
constexpr int kExitInvalid = 4;

struct StageOpts {
  std::string config;
  std::string dir = ".";
  std::optional<std::uint64_t> seed;
};

void add_stage_opts(CLI::App* cmd, StageOpts& o, bool config_required) {
  auto* c = cmd->add_option("-c,--config", o.config, "Pipeline config (JSON)");
  if (config_required) c->required()->check(CLI::ExistingFile);
  cmd->add_option("-d,--dir", o.dir, "Working directory holding the JSONL files");
}

json& at_path(json& root, std::initializer_list<const char*> keys) {
  json* node = &root;
  for (const char* k : keys) {
    if (!node->contains(k) || !(*node)[k].is_object()) (*node)[k] = json::object();
    node = &(*node)[k];
  }
  return *node;
}

/// Runs one stage against a working directory, outside any run manifest.
int run_single(const std::string& stage, const StageOpts& o, const std::function<void(json&)>& tweak = {}) {
  json raw = json{{"backends", json::object()}};
  fs::path base = fs::current_path();
  if (!o.config.empty()) {
    raw = forge::read_json(o.config);
    base = fs::absolute(o.config).parent_path();
  }
  if (tweak) tweak(raw);
  if (o.seed) raw["seed"] = *o.seed;
  raw["stages"] = json::array({stage});
  const auto cfg = forge::pipeline::parse_config(raw, base);
  fs::create_directories(o.dir);
  forge::pipeline::StageContext ctx(cfg, o.dir);
  const auto result = forge::pipeline::stage_function(stage)(ctx);
  if (!ctx.log.empty()) {
    forge::backend::BackendLog log(fs::path(o.dir) / forge::pipeline::kBackendLogFile);
    log.append(ctx.log);
  }
  std::cout << stage << ": " << result.records << " record(s)";
  for (const auto& f : result.outputs) std::cout << " " << (fs::path(o.dir) / f).string();
  std::cout << "\n";
  if (result.structure_errors > 0) {
    std::cerr << result.structure_errors << " structure error(s); see " << forge::pipeline::kGenerationReportFile << "\n";
    return kExitStructure;
  }
  return 0;
}

std::vector<std::string> split_csv(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const auto part = item.substr(start, comma - start);
      if (!part.empty()) out.push_back(part);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

std::string scenario_name(const std::string& s) {
  if (s == "commentary") return "Commentary";
  if (s == "human") return "HumanRole";
  if (s == "inter") return "InterRole";
  return s;
}

void print_report(const forge::ValidationReport& report) {
  for (const auto& v : report.violations) std::cout << v.record_id << "\t" << v.rule << "\t" << v.message << "\n";
  std::cout << report.violations.size() << " violation(s)\n";
}

// ------------------------------------------------------------- annotation

struct AnnotateOpts {
  std::string dir = ".";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t required = 4;
  std::uint64_t seed = 0;
  bool reviews = false;
  bool hide_ground_truth = false;
  std::string ui;
  std::string out = "human.jsonl";
  std::string reviews_out;
};

fs::path store_dir(const AnnotateOpts& o) { return fs::path(o.dir) / "annotation"; }

/// Tasks are built once and frozen in annotation/tasks.jsonl so restarts
/// and exports see the same blinding.
std::vector<forge::annotation::AnnotationTask> load_or_build_tasks(const AnnotateOpts& o) {
  using namespace forge;
  const auto frozen = store_dir(o) / "tasks.jsonl";
  std::vector<annotation::AnnotationTask> tasks;
  if (fs::exists(frozen)) {
    for (const auto& row : read_jsonl(frozen)) tasks.push_back(annotation::task_from_json(row));
    return tasks;
  }
  const fs::path dir = o.dir;
  const auto corpus = Corpus::load(dir);
  const auto samples = load_test_samples(dir / std::string(kTestSamplesFile));
  std::map<std::pair<std::string, std::string>, std::string> responses;
  for (const auto& row : read_jsonl(dir / pipeline::kTrajectoriesFile)) {
    const auto t = eval::trajectory_from_json(row);
    responses.emplace(std::make_pair(t.sample_id, t.agent_id), t.agent_response);
  }
  annotation::TaskBuildOptions opts;
  opts.seed = o.seed;
  opts.show_ground_truth = !o.hide_ground_truth;
  const auto pairs = annotation::pairs_from_reward_rows(read_jsonl(dir / pipeline::kRewardValFile));
  tasks = annotation::build_pair_tasks(pairs, responses, samples, corpus, opts);
  if (o.reviews) {
    std::map<std::string, json> findings;
    if (fs::exists(dir / pipeline::kFilterReportFile)) {
      for (const auto& row : read_jsonl(dir / pipeline::kFilterReportFile)) {
        findings[row.value("dialogue_id", std::string())] = row;
      }
    }
    auto reviews = annotation::build_review_tasks(corpus, findings);
    tasks.insert(tasks.end(), reviews.begin(), reviews.end());
  }
  fs::create_directories(store_dir(o));
  write_jsonl(frozen, to_rows(tasks));
  return tasks;
}

int annotate_serve(const AnnotateOpts& o) {
  using namespace forge::annotation;
  AnnotationStore store(load_or_build_tasks(o), store_dir(o), o.required, o.seed);
  ServerOptions so;
  so.host = o.host;
  so.port = o.port;
  if (const char* token = std::getenv("FORGE_ADMIN_TOKEN")) so.admin_token = token;
  if (so.admin_token.empty()) spdlog::warn("FORGE_ADMIN_TOKEN is not set; GET /export is disabled");
  if (!o.ui.empty()) so.ui_dir = o.ui;
  AnnotationServer server(store, so);
  server.serve();
  return 0;
}

int annotate_export(const AnnotateOpts& o) {
  using namespace forge::annotation;
  const auto frozen = store_dir(o) / "tasks.jsonl";
  if (!fs::exists(frozen)) throw forge::Error(forge::Errc::ConfigError, "no annotation tasks under " + o.dir);
  std::vector<AnnotationTask> tasks;
  for (const auto& row : forge::read_jsonl(frozen)) tasks.push_back(task_from_json(row));
  const AnnotationStore store(std::move(tasks), store_dir(o), o.required, o.seed);
  const auto exported = store.export_judgments();
  std::vector<json> rows;
  for (const auto& c : exported.comparisons) rows.push_back(forge::agreement::to_json(c));
  forge::write_jsonl(o.out, rows);
  if (!o.reviews_out.empty()) forge::write_jsonl(o.reviews_out, exported.reviews);
  std::cout << rows.size() << " comparison(s), " << exported.reviews.size() << " review(s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: multimodal role-play corpus construction and evaluation"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log stage progress");

  std::function<int()> action;

  // ----------------------------------------------------------- dataset
  StageOpts chars_o;
  std::string category = "all";
  std::optional<std::size_t> count;
  auto* chars = app.add_subcommand("characters", "Build characters.jsonl and images.jsonl");
  add_stage_opts(chars, chars_o, true);
  chars->add_option("--category", category, "Which inputs to use")->check(CLI::IsMember({"all", "base", "source", "hypo"}));
  chars->add_option("--count", count, "Hypothetical characters to generate");
  chars->callback([&] {
    action = [&] {
      return run_single("characters", chars_o, [&](json& raw) {
        auto& in = at_path(raw, {"inputs"});
        if (count) at_path(raw, {"inputs", "hypothetical"})["count"] = *count;
        if (category == "hypo" || category == "source") in.erase("characters"), in.erase("images");
        if (category == "hypo" || category == "base") in.erase("sources");
        if (category == "source" || category == "base") in.erase("hypothetical");
      });
    };
  });

  StageOpts dlg_o;
  std::vector<std::string> scenarios;
  auto* dlg = app.add_subcommand("dialogues", "Generate dialogues.raw.jsonl");
  add_stage_opts(dlg, dlg_o, true);
  dlg->add_option("--scenario", scenarios, "commentary, human or inter (repeatable)")
      ->check(CLI::IsMember({"commentary", "human", "inter"}));
  dlg->callback([&] {
    action = [&] {
      return run_single("dialogues", dlg_o, [&](json& raw) {
        if (scenarios.empty()) return;
        json list = json::array();
        for (const auto& s : scenarios) list.push_back(scenario_name(s));
        at_path(raw, {"generation"})["scenarios"] = list;
      });
    };
  });

  StageOpts filter_o;
  auto* filt = app.add_subcommand("filter", "Filter dialogues.raw.jsonl into dialogues.jsonl");
  add_stage_opts(filt, filter_o, false);
  filt->callback([&] { action = [&] { return run_single("filter", filter_o); }; });

  StageOpts conv_o;
  std::string split = "both";
  std::uint64_t conv_seed = 0;
  auto* conv = app.add_subcommand("convert", "Turn dialogues into training and test samples");
  add_stage_opts(conv, conv_o, false);
  conv->add_option("--split", split, "train, test or both")->check(CLI::IsMember({"train", "test", "both"}));
  conv->add_option("-s,--seed", conv_seed, "Seed for test-turn selection");
  conv->callback([&] {
    action = [&] {
      using namespace forge;
      json raw = json{{"backends", json::object()}};
      fs::path base = fs::current_path();
      if (!conv_o.config.empty()) {
        raw = read_json(conv_o.config);
        base = fs::absolute(conv_o.config).parent_path();
      }
      raw["stages"] = json::array({"convert"});
      const auto cfg = pipeline::parse_config(raw, base);
      const fs::path dir = conv_o.dir;
      const auto corpus = Corpus::load(dir);
      const auto report = validate_corpus(corpus);
      if (!report.ok()) {
        print_report(report);
        return kExitInvalid;
      }
      const auto converted = dataset::convert_corpus(corpus, cfg.agent_templates, conv_seed);
      if (split != "test") write_jsonl(dir / std::string(kSamplesFile), to_rows(converted.train));
      if (split != "train") write_jsonl(dir / std::string(kTestSamplesFile), to_rows(converted.test));
      std::cout << "convert: " << converted.train.size() << " training, " << converted.test.size() << " test sample(s)\n";
      return 0;
    };
  });

  StageOpts stats_o;
  auto* stats = app.add_subcommand("stats", "Corpus statistics (stats.json)");
  add_stage_opts(stats, stats_o, false);
  stats->callback([&] {
    action = [&] {
      const int rc = run_single("stats", stats_o);
      std::cout << forge::read_json(fs::path(stats_o.dir) / forge::pipeline::kStatsFile).dump(2) << "\n";
      return rc;
    };
  });

  // -------------------------------------------------------- evaluation
  StageOpts eval_o;
  std::vector<std::string> agents, judges;
  auto* evaluate = app.add_subcommand("evaluate", "Query agents and judges on test samples");
  add_stage_opts(evaluate, eval_o, true);
  evaluate->add_option("--agents", agents, "Agent backends (comma separated)");
  evaluate->add_option("--judge", judges, "Judge backends (repeatable or comma separated)");
  evaluate->add_option("-s,--seed", eval_o.seed, "Run seed");
  evaluate->callback([&] {
    action = [&] {
      return run_single("evaluate", eval_o, [&](json& raw) {
        auto& ev = at_path(raw, {"evaluation"});
        if (!agents.empty()) ev["agents"] = split_csv(agents);
        if (!judges.empty()) {
          const auto list = split_csv(judges);
          ev["judges"] = list;
          ev["reference_judge"] = list.front();
        }
      });
    };
  });

  StageOpts score_o;
  auto* score = app.add_subcommand("score", "Segment trajectories and aggregate scores");
  add_stage_opts(score, score_o, false);
  score->callback([&] { action = [&] { return run_single("score", score_o); }; });

  StageOpts rew_o;
  std::optional<std::size_t> holdout_q, models_per_q;
  std::string reward_judge;
  auto* reward = app.add_subcommand("export-reward", "Write reward-model training and validation files");
  add_stage_opts(reward, rew_o, true);
  reward->add_option("--holdout-questions", holdout_q, "Held-out questions");
  reward->add_option("--models-per-question", models_per_q, "Agents per held-out question");
  reward->add_option("--judge", reward_judge, "Judge whose trajectories are exported");
  reward->callback([&] {
    action = [&] {
      return run_single("export_reward", rew_o, [&](json& raw) {
        auto& r = at_path(raw, {"reward_export"});
        if (holdout_q) r["holdout_questions"] = *holdout_q;
        if (models_per_q) r["models_per_question"] = *models_per_q;
        if (!reward_judge.empty()) r["judge"] = reward_judge;
      });
    };
  });

  StageOpts agree_o;
  std::string evaluator, reference, human_file;
  std::optional<double> cap;
  auto* agree = app.add_subcommand("agree", "Agreement statistics (agreement_report.json)");
  add_stage_opts(agree, agree_o, false);
  agree->add_option("--evaluator", evaluator, "Judge under validation");
  agree->add_option("--reference", reference, "Reference judge");
  agree->add_option("--human", human_file, "Human comparisons (JSONL)")->check(CLI::ExistingFile);
  agree->add_option("--cap", cap, "Score-gap cap");
  agree->callback([&] {
    action = [&] {
      return run_single("agree", agree_o, [&](json& raw) {
        auto& a = at_path(raw, {"agreement"});
        if (!evaluator.empty()) a["evaluator"] = evaluator;
        if (!reference.empty()) a["reference"] = reference;
        if (!human_file.empty()) a["human"] = fs::absolute(human_file).string();
        if (cap) a["cap"] = *cap;
        auto& ev = at_path(raw, {"evaluation"});
        if (!ev.contains("judges")) {
          ev["judges"] = json::array({a.value("evaluator", std::string()), a.value("reference", std::string())});
        }
      });
    };
  });

  // ------------------------------------------------------- orchestration
  std::string run_config, runs_dir = "runs", stop_after;
  std::optional<std::uint64_t> run_seed;
  auto* run = app.add_subcommand("run", "Run the configured stages under runs/<id>");
  run->add_option("-c,--config", run_config, "Pipeline config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("-s,--seed", run_seed, "Override the config seed");
  run->add_option("--runs-dir", runs_dir, "Parent directory of run directories");
  run->add_option("--stop-after", stop_after, "Stop once this stage completes");
  run->callback([&] {
    action = [&] {
      forge::pipeline::RunOptions opts;
      opts.runs_dir = runs_dir;
      if (!stop_after.empty()) opts.stop_after = stop_after;
      const auto out = forge::pipeline::run(run_config, run_seed, opts);
      std::cout << out.manifest.run_id << " " << out.run_dir.string() << (out.completed ? " completed" : " stopped")
                << " (executed " << out.executed.size() << ", skipped " << out.skipped.size() << ")\n";
      return out.structure_errors > 0 ? kExitStructure : 0;
    };
  });

  std::string resume_id, resume_runs = "runs";
  auto* resume = app.add_subcommand("resume", "Continue an interrupted run");
  resume->add_option("run_id", resume_id, "Run id")->required();
  resume->add_option("--runs-dir", resume_runs, "Parent directory of run directories");
  resume->callback([&] {
    action = [&] {
      forge::pipeline::RunOptions opts;
      opts.runs_dir = resume_runs;
      const auto out = forge::pipeline::resume(resume_id, opts);
      std::cout << out.manifest.run_id << " completed (executed " << out.executed.size() << ", skipped "
                << out.skipped.size() << ")\n";
      return out.structure_errors > 0 ? kExitStructure : 0;
    };
  });

  std::string val_dir;
  forge::pipeline::CorpusFiles files;
  std::string f_chars, f_images, f_dialogues, f_samples, f_tests;
  auto* validate = app.add_subcommand("validate", "Check every corpus invariant across files");
  validate->add_option("-d,--dir", val_dir, "Directory with the standard file names");
  validate->add_option("--characters", f_chars)->check(CLI::ExistingFile);
  validate->add_option("--images", f_images)->check(CLI::ExistingFile);
  validate->add_option("--dialogues", f_dialogues)->check(CLI::ExistingFile);
  validate->add_option("--samples", f_samples)->check(CLI::ExistingFile);
  validate->add_option("--test-samples", f_tests)->check(CLI::ExistingFile);
  validate->callback([&] {
    action = [&] {
      if (!val_dir.empty()) files = forge::pipeline::CorpusFiles::in_dir(val_dir);
      if (!f_chars.empty()) files.characters = f_chars;
      if (!f_images.empty()) files.images = f_images;
      if (!f_dialogues.empty()) files.dialogues = f_dialogues;
      if (!f_samples.empty()) files.samples = f_samples;
      if (!f_tests.empty()) files.test_samples = f_tests;
      const auto report = forge::pipeline::validate_files(files);
      print_report(report);
      return report.ok() ? 0 : kExitInvalid;
    };
  });

  // ----------------------------------------------------------- annotation
  AnnotateOpts ann;
  auto* annotate = app.add_subcommand("annotate", "Human annotation service");
  annotate->require_subcommand(1);
  auto* serve = annotate->add_subcommand("serve", "Serve pairwise and review tasks over HTTP");
  serve->add_option("-d,--dir", ann.dir, "Run directory with reward_val.jsonl and trajectories.jsonl");
  serve->add_option("--host", ann.host);
  serve->add_option("--port", ann.port);
  serve->add_option("--required", ann.required, "Judgments per task");
  serve->add_option("-s,--seed", ann.seed, "Blinding and task-order seed");
  serve->add_flag("--reviews", ann.reviews, "Add profile and dialogue review tasks");
  serve->add_flag("--hide-ground-truth", ann.hide_ground_truth, "Do not show the reference answer");
  serve->add_option("--ui", ann.ui, "Static UI bundle served at /ui");
  serve->callback([&] { action = [&] { return annotate_serve(ann); }; });
  auto* exp = annotate->add_subcommand("export", "Write un-blinded human comparisons");
  exp->add_option("-d,--dir", ann.dir, "Run directory");
  exp->add_option("-o,--out", ann.out, "Comparisons output (JSONL)");
  exp->add_option("--reviews-out", ann.reviews_out, "Review verdicts output (JSONL)");
  exp->add_option("--required", ann.required, "Judgments per task");
  exp->add_option("-s,--seed", ann.seed, "Seed used when serving");
  exp->callback([&] { action = [&] { return annotate_export(ann); }; });

  std::string demo_out = "demo";
  std::uint64_t demo_seed = 7;
  auto* demo = app.add_subcommand("demo-init", "Write the offline demo project");
  demo->add_option("-o,--out", demo_out, "Target directory");
  demo->add_option("-s,--seed", demo_seed, "Seed the scripts are recorded for");
  demo->callback([&] {
    action = [&] {
      const auto s = forge::demo::write_demo(demo_out, demo_seed);
      std::cout << "wrote " << s.config.string() << " (" << s.script_entries << " scripted responses, "
                << s.human_comparisons << " human comparisons)\n";
      return 0;
    };
  });

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);
  try {
    return action ? action() : 0;
  } catch (const forge::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
