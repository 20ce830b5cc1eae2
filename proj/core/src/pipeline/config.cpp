#include "forge/pipeline/config.hpp"

#include <algorithm>
#include <set>

#include "forge/backend/registry.hpp"
#include "forge/util/error.hpp"
#include "forge/util/hash.hpp"
#include "forge/util/jsonl.hpp"

namespace forge::pipeline {

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw Error(Errc::ConfigError, where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items()) {
    if (!ok.count(k)) throw Error(Errc::ConfigError, where + ": unknown key '" + k + "'");
  }
}

template <typename T>
T get(const json& obj, const char* key, T fallback, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::ConfigError, where + "." + key + " has the wrong type");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path = p;
  return path.is_relative() ? (base / path).lexically_normal() : path;
}

template <typename F>
auto wrap(const std::string& where, F f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigError) throw;
    throw Error(Errc::ConfigError, where + ": " + e.what());
  }
}

}  // namespace

bool PipelineConfig::has_stage(const std::string& name) const {
  return std::find(stages.begin(), stages.end(), name) != stages.end();
}

std::vector<std::filesystem::path> PipelineConfig::external_inputs() const {
  std::vector<std::filesystem::path> out;
  if (characters_file) out.push_back(*characters_file);
  if (images_file) out.push_back(*images_file);
  for (const auto& s : sources) out.push_back(s.file);
  if (agreement.human) out.push_back(*agreement.human);
  for (const auto& [name, block] : raw.at("backends").items()) {
    if (block.contains("script")) out.push_back(resolve(base_dir, block.at("script").get<std::string>()));
  }
  return out;
}

std::vector<std::filesystem::path> PipelineConfig::external_inputs(const std::string& stage) const {
  std::vector<std::filesystem::path> out;
  const auto script_of = [&](const std::string& backend) {
    const auto& backends = raw.at("backends");
    const auto it = backends.find(backend);
    if (it != backends.end() && it->contains("script")) {
      out.push_back(resolve(base_dir, it->at("script").get<std::string>()));
    }
  };
  if (stage == "characters") {
    if (characters_file) out.push_back(*characters_file);
    if (images_file) out.push_back(*images_file);
    for (const auto& s : sources) out.push_back(s.file);
    if (!generation.backend.empty()) script_of(generation.backend);
  } else if (stage == "dialogues") {
    if (!generation.backend.empty()) script_of(generation.backend);
  } else if (stage == "evaluate") {
    for (const auto& a : evaluation.agents) script_of(a);
    for (const auto& j : evaluation.judges) script_of(j.name);
  } else if (stage == "agree") {
    if (agreement.human) out.push_back(*agreement.human);
  }
  return out;
}

PipelineConfig parse_config(const json& raw, const std::filesystem::path& base_dir) {
  only_keys(raw, "config",
            {"name", "seed", "workers", "stages", "inputs", "backends", "generation", "filter", "templates",
             "evaluation", "reward_export", "agreement"});
  PipelineConfig c;
  c.raw = raw;
  c.base_dir = base_dir;
  c.digest = sha256_hex(canonical_dump(raw));
  c.seed = get<std::uint64_t>(raw, "seed", 0, "config");
  c.workers = std::max<std::size_t>(1, get<std::size_t>(raw, "workers", 4, "config"));

  c.stages = get<std::vector<std::string>>(raw, "stages", all_stages(), "config");
  std::size_t last = 0;
  for (std::size_t i = 0; i < c.stages.size(); ++i) {
    const auto it = std::find(all_stages().begin(), all_stages().end(), c.stages[i]);
    if (it == all_stages().end()) throw Error(Errc::ConfigError, "unknown stage '" + c.stages[i] + "'");
    const auto pos = static_cast<std::size_t>(it - all_stages().begin());
    if (i > 0 && pos <= last) throw Error(Errc::ConfigError, "stages must be listed once, in pipeline order");
    last = pos;
  }

  if (!raw.contains("backends")) throw Error(Errc::ConfigError, "config needs a 'backends' object");
  const json& backends = raw.at("backends");
  if (!backends.is_object()) throw Error(Errc::ConfigError, "'backends' must be an object");
  for (const auto& [name, block] : backends.items()) {
    if (!block.is_object() || !block.contains("kind")) {
      throw Error(Errc::ConfigError, "backend '" + name + "' needs a 'kind'");
    }
    backend::reject_inline_credentials(name, block);
  }
  auto require_backend = [&](const std::string& name, const std::string& role) {
    if (name.empty()) throw Error(Errc::ConfigError, role + " names no backend");
    if (!backends.contains(name)) {
      throw Error(Errc::ConfigError, role + " references backend '" + name + "', which is not declared");
    }
  };

  if (raw.contains("inputs")) {
    const json& in = raw.at("inputs");
    only_keys(in, "inputs", {"characters", "images", "sources", "hypothetical"});
    if (in.contains("characters")) c.characters_file = resolve(base_dir, in.at("characters").get<std::string>());
    if (in.contains("images")) c.images_file = resolve(base_dir, in.at("images").get<std::string>());
    for (const auto& s : in.value("sources", json::array())) {
      only_keys(s, "inputs.sources[]", {"name", "series", "category", "language", "split", "file"});
      wrap("inputs.sources", [&] {
        c.sources.push_back(SourceSpec{s.at("name").get<std::string>(), s.at("series").get<std::string>(),
                                       parse_category(s.value("category", "Fictional")),
                                       parse_language(s.value("language", "en")), parse_split(s.value("split", "Train")),
                                       resolve(base_dir, s.at("file").get<std::string>())});
        return 0;
      });
    }
    if (in.contains("hypothetical")) {
      const json& h = in.at("hypothetical");
      only_keys(h, "inputs.hypothetical", {"count", "series", "language", "split"});
      wrap("inputs.hypothetical", [&] {
        c.hypothetical.count = h.value("count", std::size_t{0});
        c.hypothetical.series = h.value("series", c.hypothetical.series);
        c.hypothetical.language = parse_language(h.value("language", "en"));
        c.hypothetical.split = parse_split(h.value("split", "Train"));
        return 0;
      });
    }
  }

  if (raw.contains("generation")) {
    const json& g = raw.at("generation");
    only_keys(g, "generation",
              {"backend", "simplify_max_chars", "simplify_attempts", "summary_chunk_chars", "dialogues_per_pair",
               "scenarios", "images_per_character", "turn_pairs", "in_test_fraction", "prompts"});
    auto& s = c.generation;
    s.backend = get<std::string>(g, "backend", "", "generation");
    s.simplify_max_chars = get<std::size_t>(g, "simplify_max_chars", 0, "generation");
    s.simplify_attempts = get<int>(g, "simplify_attempts", 2, "generation");
    s.summary_chunk_chars = get<std::size_t>(g, "summary_chunk_chars", 6000, "generation");
    s.dialogues_per_pair = get<int>(g, "dialogues_per_pair", 1, "generation");
    s.images_per_character = get<std::size_t>(g, "images_per_character", 2, "generation");
    s.turn_pairs = get<int>(g, "turn_pairs", 3, "generation");
    s.in_test_fraction = get<double>(g, "in_test_fraction", 0.2, "generation");
    if (g.contains("scenarios")) {
      s.scenarios.clear();
      for (const auto& name : g.at("scenarios")) {
        s.scenarios.push_back(wrap("generation.scenarios", [&] { return parse_scenario(name.get<std::string>()); }));
      }
    }
    if (g.contains("prompts")) s.prompts = dataset::GenerationPrompts::from_json(g.at("prompts"));
    if (s.dialogues_per_pair < 1) throw Error(Errc::ConfigError, "generation.dialogues_per_pair must be >= 1");
    if (s.in_test_fraction < 0.0 || s.in_test_fraction > 1.0) {
      throw Error(Errc::ConfigError, "generation.in_test_fraction must be within [0, 1]");
    }
  }
  const bool generates = c.has_stage("dialogues") || !c.sources.empty() || c.hypothetical.count > 0 ||
                         (c.has_stage("characters") && c.generation.simplify_max_chars > 0);
  if (generates) require_backend(c.generation.backend, "generation");

  if (raw.contains("filter")) c.filter = wrap("filter", [&] { return dataset::FilterConfig::from_json(raw.at("filter")); });
  if (raw.contains("templates")) {
    const json& t = raw.at("templates");
    only_keys(t, "templates", {"agent", "judge"});
    if (t.contains("agent")) c.agent_templates = eval::AgentTemplates::from_json(t.at("agent"));
    if (t.contains("judge")) c.judge_template = eval::JudgeTemplate::from_json(t.at("judge"));
  }

  if (raw.contains("evaluation")) {
    const json& e = raw.at("evaluation");
    only_keys(e, "evaluation", {"agents", "judges", "reference_judge", "scale", "commentary_chars", "max_test_samples"});
    auto& s = c.evaluation;
    s.agents = get<std::vector<std::string>>(e, "agents", {}, "evaluation");
    for (const auto& j : e.value("judges", json::array())) {
      JudgeSpec spec;
      if (j.is_string()) {
        spec.name = j.get<std::string>();
      } else {
        only_keys(j, "evaluation.judges[]", {"name", "mode"});
        spec.name = j.at("name").get<std::string>();
        const auto mode = j.value("mode", std::string("full"));
        if (mode != "full" && mode != "per_metric") throw Error(Errc::ConfigError, "judge mode must be full or per_metric");
        spec.mode = mode == "full" ? JudgeMode::Full : JudgeMode::PerMetric;
      }
      s.judges.push_back(spec);
    }
    s.reference_judge = get<std::string>(e, "reference_judge", s.judges.empty() ? "" : s.judges.front().name, "evaluation");
    if (e.contains("scale")) {
      s.scale.min = e.at("scale").value("min", 1);
      s.scale.max = e.at("scale").value("max", 10);
      if (s.scale.min < 1 || s.scale.max <= s.scale.min) throw Error(Errc::ConfigError, "evaluation.scale is invalid");
    }
    s.commentary_chars = get<std::size_t>(e, "commentary_chars", 400, "evaluation");
    s.max_test_samples = get<std::size_t>(e, "max_test_samples", 0, "evaluation");
  }
  if (c.has_stage("evaluate")) {
    if (c.evaluation.agents.empty() || c.evaluation.judges.empty()) {
      throw Error(Errc::ConfigError, "evaluation needs at least one agent and one judge");
    }
    for (const auto& a : c.evaluation.agents) require_backend(a, "evaluation agent");
    for (const auto& j : c.evaluation.judges) require_backend(j.name, "evaluation judge");
  }
  auto require_judge = [&](const std::string& name, const std::string& role) {
    const bool found = std::any_of(c.evaluation.judges.begin(), c.evaluation.judges.end(),
                                   [&](const JudgeSpec& j) { return j.name == name; });
    if (!found) throw Error(Errc::ConfigError, role + " '" + name + "' is not one of the evaluation judges");
  };

  if (raw.contains("reward_export")) {
    const json& r = raw.at("reward_export");
    only_keys(r, "reward_export", {"judge", "holdout_questions", "models_per_question"});
    c.reward.judge = get<std::string>(r, "judge", c.evaluation.reference_judge, "reward_export");
    c.reward.holdout_questions = get<std::size_t>(r, "holdout_questions", 0, "reward_export");
    c.reward.models_per_question = get<std::size_t>(r, "models_per_question", 0, "reward_export");
  } else {
    c.reward.judge = c.evaluation.reference_judge;
  }
  if (c.has_stage("export_reward")) require_judge(c.reward.judge, "reward_export.judge");

  if (raw.contains("agreement")) {
    const json& a = raw.at("agreement");
    only_keys(a, "agreement", {"evaluator", "reference", "human", "cap"});
    c.agreement.evaluator = get<std::string>(a, "evaluator", "", "agreement");
    c.agreement.reference = get<std::string>(a, "reference", c.evaluation.reference_judge, "agreement");
    if (a.contains("human")) c.agreement.human = resolve(base_dir, a.at("human").get<std::string>());
    c.agreement.cap = get<double>(a, "cap", 0.4, "agreement");
    if (!(c.agreement.cap > 0.0)) throw Error(Errc::ConfigError, "agreement.cap must be positive");
  }
  if (c.has_stage("agree")) {
    require_judge(c.agreement.evaluator, "agreement.evaluator");
    require_judge(c.agreement.reference, "agreement.reference");
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  json raw;
  try {
    raw = read_json(path);
  } catch (const Error& e) {
    throw Error(Errc::ConfigError, std::string("cannot load config: ") + e.what());
  }
  return parse_config(raw, std::filesystem::absolute(path).parent_path());
}

}  // namespace forge::pipeline
