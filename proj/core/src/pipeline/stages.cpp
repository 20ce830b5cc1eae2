#include "forge/pipeline/stages.hpp"

#include <algorithm>
#include <set>

#include <spdlog/spdlog.h>

#include "forge/agreement/report.hpp"
#include "forge/dataset/conversion.hpp"
#include "forge/dataset/dialogue_gen.hpp"
#include "forge/dataset/filter.hpp"
#include "forge/dataset/profiles.hpp"
#include "forge/dataset/stats.hpp"
#include "forge/domain/corpus.hpp"
#include "forge/domain/ids.hpp"
#include "forge/domain/validation.hpp"
#include "forge/eval/reward_export.hpp"
#include "forge/eval/trajectory.hpp"
#include "forge/util/error.hpp"
#include "forge/util/jsonl.hpp"
#include "forge/util/rng.hpp"
#include "forge/util/text.hpp"
#include "forge/util/thread_pool.hpp"

namespace forge::pipeline {

using backend::BackendRecord;
using dataset::Trace;

StageContext::StageContext(const PipelineConfig& config, std::filesystem::path dir,
                           std::shared_ptr<const backend::BackendRegistry> registry)
    : config_(config),
      dir_(std::move(dir)),
      registry_(registry ? std::move(registry) : std::make_shared<backend::BackendRegistry>()) {}

backend::BackendHandle& StageContext::backend(const std::string& name) {
  std::lock_guard lock(mutex_);
  if (auto it = backends_.find(name); it != backends_.end()) return *it->second;
  const json& blocks = config_.raw.at("backends");
  if (!blocks.contains(name)) throw Error(Errc::ConfigError, "backend '" + name + "' is not declared");
  auto handle = registry_->build_one(name, blocks.at(name), config_.base_dir);
  auto& ref = *handle;
  backends_.emplace(name, std::move(handle));
  return ref;
}

void stage_error(const std::string& stage, const std::string& record, const std::string& what) {
  std::string msg = "stage " + stage;
  if (!record.empty()) msg += ", record " + record;
  throw Error(Errc::StageError, msg + ": " + what);
}

namespace {

/// Runs `fn`, converting library errors into a StageError naming the record.
template <typename F>
auto guarded(const std::string& stage, const std::string& record, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.code() == Errc::StageError) throw;
    stage_error(stage, record, e.what());
  }
}

void append_traces(StageContext& ctx, std::vector<Trace>& traces) {
  for (auto& t : traces) {
    for (auto& r : t) ctx.log.push_back(std::move(r));
  }
}

void require_report(const std::string& stage, const ValidationReport& report) {
  if (report.ok()) return;
  const auto& v = report.violations.front();
  stage_error(stage, v.record_id,
              v.rule + ": " + v.message + " (" + std::to_string(report.violations.size()) + " violation(s))");
}

json with_blank_id(json row) {
  if (row.is_object() && !row.contains("id")) row["id"] = "";
  return row;
}

// ---------------------------------------------------------------- characters

std::vector<Character> load_input_characters(const std::filesystem::path& path) {
  std::vector<Character> out;
  std::size_t line = 0;
  for (const auto& row : read_jsonl(path)) {
    ++line;
    out.push_back(guarded("characters", path.filename().string() + ":" + std::to_string(line),
                          [&] { return with_id(character_from_json(with_blank_id(row))); }));
  }
  return out;
}

std::vector<ImageRecord> load_input_images(const std::filesystem::path& path, const std::vector<Character>& chars) {
  std::vector<ImageRecord> out;
  std::size_t line = 0;
  for (auto row : read_jsonl(path)) {
    ++line;
    row = with_blank_id(std::move(row));
    if (row.contains("owner_character") && row.at("owner_character").is_string()) {
      const auto owner = row.at("owner_character").get<std::string>();
      const auto by_name =
          std::find_if(chars.begin(), chars.end(), [&](const Character& c) { return c.name == owner; });
      if (by_name != chars.end()) row["owner_character"] = by_name->id;
    }
    out.push_back(guarded("characters", path.filename().string() + ":" + std::to_string(line),
                          [&] { return with_id(image_from_json(row)); }));
  }
  return out;
}

}  // namespace

StageResult run_characters_stage(StageContext& ctx) {
  const auto& cfg = ctx.config();
  const auto& gen = cfg.generation;
  std::vector<Character> characters;
  if (cfg.characters_file) characters = load_input_characters(*cfg.characters_file);

  std::vector<Character> summarized(cfg.sources.size());
  std::vector<Trace> source_traces(cfg.sources.size());
  parallel_for(cfg.sources.size(), cfg.workers, [&](std::size_t i) {
    const auto& src = cfg.sources[i];
    guarded("characters", src.name, [&] {
      Character c;
      c.name = src.name;
      c.series = src.series;
      c.category = src.category;
      c.language = src.language;
      c.split = src.split;
      c.profile = dataset::summarize_profile(read_text(src.file), src.name, src.series, ctx.backend(gen.backend),
                                             gen.prompts, gen.summary_chunk_chars, &source_traces[i]);
      summarized[i] = with_id(std::move(c));
      return 0;
    });
  });
  append_traces(ctx, source_traces);
  characters.insert(characters.end(), summarized.begin(), summarized.end());

  const auto& hypo = cfg.hypothetical;
  if (hypo.count > 0) {
    Trace meta_trace;
    const auto metas = guarded("characters", "hypothetical", [&] {
      return dataset::generate_meta_batch(hypo.count, ctx.backend(gen.backend), gen.prompts, &meta_trace);
    });
    ctx.log.insert(ctx.log.end(), meta_trace.begin(), meta_trace.end());
    std::vector<Character> expanded(metas.size());
    std::vector<Trace> traces(metas.size());
    parallel_for(metas.size(), cfg.workers, [&](std::size_t i) {
      guarded("characters", metas[i].name, [&] {
        Character c;
        c.name = metas[i].name;
        c.series = hypo.series;
        c.category = Category::HypotheticalRealLife;
        c.language = hypo.language;
        c.split = hypo.split;
        c.profile = dataset::expand_profile(metas[i], ctx.backend(gen.backend), gen.prompts, &traces[i]);
        expanded[i] = with_id(std::move(c));
        return 0;
      });
    });
    append_traces(ctx, traces);
    characters.insert(characters.end(), expanded.begin(), expanded.end());
  }

  if (gen.simplify_max_chars > 0) {
    std::vector<Trace> traces(characters.size());
    parallel_for(characters.size(), cfg.workers, [&](std::size_t i) {
      auto& c = characters[i];
      if (c.profile.simplified) return;
      guarded("characters", c.id, [&] {
        c.profile = dataset::simplify_profile(c.profile, gen.simplify_max_chars, ctx.backend(gen.backend),
                                              gen.prompts, gen.simplify_attempts, &traces[i], c.id);
        return 0;
      });
    });
    append_traces(ctx, traces);
  }

  std::vector<ImageRecord> images;
  if (cfg.images_file) images = load_input_images(*cfg.images_file, characters);

  ValidationReport report;
  std::set<std::string> ids;
  for (const auto& c : characters) {
    report.merge(validate_character(c));
    if (!ids.insert(c.id).second) report.add(c.id, "character.duplicate", "character '" + c.name + "' is defined twice");
  }
  for (const auto& img : images) report.merge(validate_image(img));
  require_report("characters", report);

  write_jsonl(ctx.path(std::string(kCharactersFile)), to_rows(characters));
  write_jsonl(ctx.path(std::string(kImagesFile)), to_rows(images));
  return {characters.size() + images.size(), {std::string(kCharactersFile), std::string(kImagesFile)}, 0};
}

// ----------------------------------------------------------------- dialogues

namespace {

struct PlanItem {
  dataset::DialogueRequest request;
  std::string key;
};

std::string plan_key(const dataset::DialogueRequest& r) {
  std::string key = std::string(to_string(r.scenario)) + "/" + r.role->id;
  if (r.partner) key += "+" + r.partner->id;
  return key + "/" + r.image->id + "/" + std::to_string(r.variant);
}

bool out_of_distribution(const Character& c) { return c.split == Split::OutTest; }

/// Owned images first, then generic ones, each group shuffled by `key`.
std::vector<const ImageRecord*> pick_images(const std::vector<ImageRecord>& images,
                                            const std::set<std::string>& owners, std::uint64_t seed,
                                            const std::string& key, std::size_t limit) {
  std::vector<const ImageRecord*> owned;
  std::vector<const ImageRecord*> generic;
  for (const auto& img : images) {
    if (img.kind == ImageKind::Generic) {
      generic.push_back(&img);
    } else if (img.owner_character && owners.count(*img.owner_character)) {
      owned.push_back(&img);
    }
  }
  KeyedRng(seed, "images/owned/" + key).shuffle(owned);
  KeyedRng(seed, "images/generic/" + key).shuffle(generic);
  owned.insert(owned.end(), generic.begin(), generic.end());
  if (owned.size() > limit) owned.resize(limit);
  return owned;
}

std::vector<PlanItem> plan_dialogues(const Corpus& corpus, const PipelineConfig& cfg) {
  const auto& gen = cfg.generation;
  const auto& chars = corpus.characters();
  auto wants = [&](Scenario s) { return std::find(gen.scenarios.begin(), gen.scenarios.end(), s) != gen.scenarios.end(); };

  std::vector<PlanItem> plan;
  auto add = [&](Scenario s, const Character& role, const Character* partner, const ImageRecord* image) {
    for (int v = 0; v < gen.dialogues_per_pair; ++v) {
      dataset::DialogueRequest r;
      r.scenario = s;
      r.role = &role;
      r.partner = partner;
      r.image = image;
      r.turn_pairs = gen.turn_pairs;
      r.variant = v;
      PlanItem item{r, plan_key(r)};
      if (out_of_distribution(role)) {
        item.request.split = Split::OutTest;
      } else if (role.split == Split::InTest || (partner && partner->split == Split::InTest)) {
        item.request.split = Split::InTest;
      } else {
        const bool in_test = KeyedRng(cfg.seed, "split/" + item.key).unit() < gen.in_test_fraction;
        item.request.split = in_test ? Split::InTest : Split::Train;
      }
      plan.push_back(std::move(item));
    }
  };

  for (const auto& c : chars) {
    const auto images = pick_images(corpus.images(), {c.id}, cfg.seed, c.id, gen.images_per_character);
    for (const auto* img : images) {
      if (wants(Scenario::Commentary)) add(Scenario::Commentary, c, nullptr, img);
      if (wants(Scenario::HumanRole)) add(Scenario::HumanRole, c, nullptr, img);
    }
  }
  if (wants(Scenario::InterRole)) {
    for (std::size_t i = 0; i < chars.size(); ++i) {
      for (std::size_t j = i + 1; j < chars.size(); ++j) {
        const auto& a = chars[i];
        const auto& b = chars[j];
        if (a.series != b.series || a.language != b.language) continue;
        if (out_of_distribution(a) != out_of_distribution(b)) continue;
        const auto images =
            pick_images(corpus.images(), {a.id, b.id}, cfg.seed, a.id + "+" + b.id, gen.images_per_character);
        for (const auto* img : images) add(Scenario::InterRole, a, &b, img);
      }
    }
  }
  return plan;
}

}  // namespace

StageResult run_dialogues_stage(StageContext& ctx) {
  const auto& cfg = ctx.config();
  const Corpus corpus(load_characters(ctx.path(std::string(kCharactersFile))),
                      load_images(ctx.path(std::string(kImagesFile))), {});
  const auto plan = plan_dialogues(corpus, cfg);

  struct Slot {
    std::optional<Dialogue> dialogue;
    std::optional<Error> error;
  };
  std::vector<Slot> slots(plan.size());
  std::vector<Trace> traces(plan.size());
  parallel_for(plan.size(), cfg.workers, [&](std::size_t i) {
    try {
      slots[i].dialogue = dataset::generate_dialogue(plan[i].request, ctx.backend(cfg.generation.backend),
                                                     cfg.generation.prompts, &traces[i]);
    } catch (const Error& e) {
      switch (e.code()) {
        case Errc::ParseError:
        case Errc::StructureError:
        case Errc::BackendError:
          slots[i].error = e;
          break;
        default:
          stage_error("dialogues", plan[i].key, e.what());
      }
    }
  });
  append_traces(ctx, traces);

  std::vector<Dialogue> dialogues;
  std::vector<json> report;
  std::set<std::string> seen;
  std::size_t structure_errors = 0;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    if (slots[i].error) {
      const auto& e = *slots[i].error;
      if (e.code() == Errc::StructureError) ++structure_errors;
      report.push_back({{"item", plan[i].key}, {"error", to_string(e.code())}, {"message", e.what()}});
      continue;
    }
    auto& d = *slots[i].dialogue;
    if (seen.insert(d.id).second) dialogues.push_back(std::move(d));
  }
  if (structure_errors > 0) spdlog::warn("dialogues: {} generated dialogue(s) broke their scenario shape", structure_errors);
  write_jsonl(ctx.path(kRawDialoguesFile), to_rows(dialogues));
  write_jsonl(ctx.path(kGenerationReportFile), report);
  return {dialogues.size(), {kRawDialoguesFile, kGenerationReportFile}, structure_errors};
}

// -------------------------------------------------------------------- filter

StageResult run_filter_stage(StageContext& ctx) {
  const auto dialogues = load_dialogues(ctx.path(kRawDialoguesFile));
  const dataset::DialogueFilter filter(ctx.config().filter);
  std::vector<dataset::FilterOutcome> outcomes(dialogues.size());
  parallel_for(dialogues.size(), ctx.config().workers, [&](std::size_t i) { outcomes[i] = filter.filter(dialogues[i]); });

  std::vector<Dialogue> kept;
  std::vector<json> report;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < dialogues.size(); ++i) {
    const auto& o = outcomes[i];
    report.push_back(dataset::to_json(o, dialogues[i].id));
    const Dialogue* keep = nullptr;
    if (o.verdict == dataset::Verdict::Keep) keep = &dialogues[i];
    if (o.verdict == dataset::Verdict::Repair) keep = &*o.repaired_dialogue;
    if (keep && seen.insert(keep->id).second) kept.push_back(*keep);
  }
  write_jsonl(ctx.path(std::string(kDialoguesFile)), to_rows(kept));
  write_jsonl(ctx.path(kFilterReportFile), report);
  return {kept.size(), {std::string(kDialoguesFile), kFilterReportFile}, 0};
}

// ------------------------------------------------------------------- convert

StageResult run_convert_stage(StageContext& ctx) {
  const auto corpus = guarded("convert", "", [&] { return Corpus::load(ctx.dir()); });
  require_report("convert", validate_corpus(corpus));
  const auto converted = guarded("convert", "", [&] {
    return dataset::convert_corpus(corpus, ctx.config().agent_templates, ctx.config().seed);
  });
  ValidationReport report = validate_training_samples(converted.train, corpus);
  report.merge(validate_test_samples(converted.test, corpus));
  require_report("convert", report);
  write_jsonl(ctx.path(std::string(kSamplesFile)), to_rows(converted.train));
  write_jsonl(ctx.path(std::string(kTestSamplesFile)), to_rows(converted.test));
  return {converted.train.size() + converted.test.size(),
          {std::string(kSamplesFile), std::string(kTestSamplesFile)},
          0};
}

// --------------------------------------------------------------------- stats

StageResult run_stats_stage(StageContext& ctx) {
  const auto corpus = guarded("stats", "", [&] { return Corpus::load(ctx.dir()); });
  const auto stats = dataset::corpus_stats(corpus);
  write_json(ctx.path(kStatsFile), dataset::to_json(stats));
  return {corpus.dialogues().size(), {kStatsFile}, 0};
}

// ------------------------------------------------------------------ evaluate

namespace {

std::vector<TestSample> evaluation_samples(const StageContext& ctx) {
  auto samples = load_test_samples(ctx.path(std::string(kTestSamplesFile)));
  std::sort(samples.begin(), samples.end(), [](const TestSample& a, const TestSample& b) { return a.id < b.id; });
  const auto cap = ctx.config().evaluation.max_test_samples;
  if (cap > 0 && samples.size() > cap) samples.resize(cap);
  return samples;
}

eval::ParseOptions parse_options(const EvaluationSettings& s) {
  eval::ParseOptions o;
  o.scale = s.scale;
  o.commentary_chars = s.commentary_chars;
  return o;
}

eval::JudgeOptions judge_options(const EvaluationSettings& s) { return {s.scale, s.commentary_chars}; }

backend::ChatRequest to_request(const eval::RenderedPrompt& p, std::string tag) {
  return backend::make_request(p.system, p.user, p.image_uri, std::move(tag));
}

std::vector<eval::EvaluationTrajectory> load_trajectories(const StageContext& ctx) {
  std::vector<eval::EvaluationTrajectory> out;
  for (const auto& row : read_jsonl(ctx.path(kTrajectoriesFile))) out.push_back(eval::trajectory_from_json(row));
  return out;
}

std::vector<eval::EvaluationTrajectory> of_judge(const std::vector<eval::EvaluationTrajectory>& all,
                                                 const std::string& judge) {
  std::vector<eval::EvaluationTrajectory> out;
  std::copy_if(all.begin(), all.end(), std::back_inserter(out),
               [&](const eval::EvaluationTrajectory& t) { return t.judge_id == judge; });
  return out;
}

}  // namespace

StageResult run_evaluate_stage(StageContext& ctx) {
  const auto& cfg = ctx.config();
  const auto& ev = cfg.evaluation;
  const auto corpus = guarded("evaluate", "", [&] { return Corpus::load(ctx.dir()); });
  const auto samples = evaluation_samples(ctx);
  const std::size_t n = samples.size();
  const std::size_t jobs = ev.agents.size() * n;

  // Agent responses, agent-major.
  std::vector<std::string> responses(jobs);
  std::vector<Trace> agent_traces(jobs);
  parallel_for(jobs, cfg.workers, [&](std::size_t i) {
    const auto& agent = ev.agents[i / n];
    const auto& sample = samples[i % n];
    guarded("evaluate", sample.id, [&] {
      const auto prompt = eval::build_agent_prompt(sample, corpus, cfg.agent_templates);
      const auto record = backend::complete(ctx.backend(agent), to_request(prompt, "agent/" + agent + "/" + sample.id));
      agent_traces[i].push_back(record);
      // A failed agent call is judged as an empty answer.
      responses[i] = record.ok() ? record.response : std::string();
      return 0;
    });
  });
  append_traces(ctx, agent_traces);

  const auto popts = parse_options(ev);
  const auto jopts = judge_options(ev);
  std::vector<eval::EvaluationTrajectory> trajectories(ev.judges.size() * jobs);
  std::vector<Trace> judge_traces(trajectories.size());
  parallel_for(trajectories.size(), cfg.workers, [&](std::size_t i) {
    const auto& judge = ev.judges[i / jobs];
    const std::size_t job = i % jobs;
    const auto& agent = ev.agents[job / n];
    const auto& sample = samples[job % n];
    const auto& response = responses[job];
    const std::string base_tag = "judge/" + judge.name + "/" + sample.id + "/" + agent;
    guarded("evaluate", sample.id, [&] {
      std::string raw;
      if (judge.mode == JudgeMode::Full) {
        const std::vector<eval::Metric> all(eval::kAllMetrics.begin(), eval::kAllMetrics.end());
        const auto prompt = eval::build_judge_prompt(sample, response, sample.ground_truth, corpus,
                                                     cfg.judge_template, all, jopts);
        const auto record = backend::complete(ctx.backend(judge.name), to_request(prompt, base_tag));
        judge_traces[i].push_back(record);
        if (record.ok()) raw = record.response;
      } else {
        std::vector<std::string> parts;
        for (const auto m : eval::kAllMetrics) {
          const auto prompt = eval::build_judge_prompt(sample, response, sample.ground_truth, corpus,
                                                       cfg.judge_template, {m}, jopts);
          const auto record = backend::complete(ctx.backend(judge.name),
                                                to_request(prompt, base_tag + "/" + std::string(eval::to_string(m))));
          judge_traces[i].push_back(record);
          if (record.ok()) parts.push_back(record.response);
        }
        raw = text::join(parts, "\n");
      }
      trajectories[i] = eval::make_trajectory(sample.id, agent, judge.name, response, raw, popts);
      return 0;
    });
  });
  append_traces(ctx, judge_traces);

  write_jsonl(ctx.path(kTrajectoriesFile), to_rows(trajectories));
  return {trajectories.size(), {kTrajectoriesFile}, 0};
}

// --------------------------------------------------------------------- score

StageResult run_score_stage(StageContext& ctx) {
  const auto& ev = ctx.config().evaluation;
  const auto trajectories = load_trajectories(ctx);
  std::vector<eval::MetricSample> records;
  std::vector<json> rows;
  std::vector<std::string> judges;
  for (const auto& j : ev.judges) judges.push_back(j.name);
  for (const auto& t : trajectories) {
    if (std::find(judges.begin(), judges.end(), t.judge_id) == judges.end()) judges.push_back(t.judge_id);
  }
  for (const auto& judge : judges) {
    std::vector<eval::MetricSample> mine;
    for (const auto& t : trajectories) {
      if (t.judge_id != judge || !t.ok()) continue;
      auto seg = guarded("score", t.sample_id, [&] { return eval::segment_trajectory(t, ev.scale); });
      mine.insert(mine.end(), seg.begin(), seg.end());
    }
    for (auto& row : eval::score_rows(eval::aggregate(mine), judge)) rows.push_back(std::move(row));
    records.insert(records.end(), mine.begin(), mine.end());
  }
  write_jsonl(ctx.path(kMetricSamplesFile), to_rows(records));
  write_jsonl(ctx.path(kScoresFile), rows);
  return {records.size(), {kMetricSamplesFile, kScoresFile}, 0};
}

// ------------------------------------------------------------- export_reward

StageResult run_export_reward_stage(StageContext& ctx) {
  const auto& cfg = ctx.config();
  const auto corpus = guarded("export_reward", "", [&] { return Corpus::load(ctx.dir()); });
  std::map<std::string, TestSample> samples;
  for (auto& s : load_test_samples(ctx.path(std::string(kTestSamplesFile)))) samples.emplace(s.id, std::move(s));
  const auto trajectories = of_judge(load_trajectories(ctx), cfg.reward.judge);
  const auto jopts = judge_options(cfg.evaluation);

  const eval::RewardPromptBuilder builder = [&](const eval::EvaluationTrajectory& t, eval::Metric m) {
    const auto it = samples.find(t.sample_id);
    if (it == samples.end()) stage_error("export_reward", t.sample_id, "trajectory names an unknown test sample");
    return eval::build_judge_prompt(it->second, t.agent_response, it->second.ground_truth, corpus, cfg.judge_template,
                                    {m}, jopts)
        .text();
  };
  eval::HoldoutSpec spec;
  spec.questions = cfg.reward.holdout_questions;
  spec.models_per_question = cfg.reward.models_per_question;
  spec.seed = cfg.seed;
  const auto split =
      guarded("export_reward", "", [&] { return eval::export_reward_training(trajectories, spec, builder); });
  write_jsonl(ctx.path(kRewardTrainFile), to_rows(split.train));
  write_jsonl(ctx.path(kRewardValFile), to_rows(split.validation));
  return {split.train.size() + split.validation.size(), {kRewardTrainFile, kRewardValFile}, 0};
}

// --------------------------------------------------------------------- agree

StageResult run_agree_stage(StageContext& ctx) {
  const auto& cfg = ctx.config();
  const auto all = load_trajectories(ctx);
  agreement::AgreementInputs in;
  in.evaluator_id = cfg.agreement.evaluator;
  in.reference_id = cfg.agreement.reference;
  in.evaluator = of_judge(all, in.evaluator_id);
  in.reference = of_judge(all, in.reference_id);
  if (cfg.agreement.human) {
    for (const auto& row : read_jsonl(*cfg.agreement.human)) {
      in.human.push_back(guarded("agree", "", [&] { return agreement::human_comparison_from_json(row); }));
    }
  }
  in.seed = cfg.seed;
  in.cap = cfg.agreement.cap;
  in.scale = cfg.evaluation.scale;
  const auto report = guarded("agree", "", [&] { return agreement::agreement_report(in); });
  write_json(ctx.path(kAgreementFile), agreement::to_json(report));
  return {in.evaluator.size() + in.reference.size(), {kAgreementFile}, 0};
}

const StageFn& stage_function(const std::string& name) {
  static const std::map<std::string, StageFn> kStages = {
      {"characters", run_characters_stage}, {"dialogues", run_dialogues_stage},
      {"filter", run_filter_stage},         {"convert", run_convert_stage},
      {"stats", run_stats_stage},           {"evaluate", run_evaluate_stage},
      {"score", run_score_stage},           {"export_reward", run_export_reward_stage},
      {"agree", run_agree_stage},
  };
  const auto it = kStages.find(name);
  if (it == kStages.end()) throw Error(Errc::ConfigError, "unknown stage '" + name + "'");
  return it->second;
}

}  // namespace forge::pipeline
