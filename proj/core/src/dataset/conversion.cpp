#include "forge/dataset/conversion.hpp"

#include "forge/domain/context.hpp"
#include "forge/domain/ids.hpp"
#include "forge/util/error.hpp"
#include "forge/util/rng.hpp"

namespace forge::dataset {

namespace {

std::vector<int> require_role_turns(const Dialogue& d, const std::string& role) {
  auto turns = role_turn_indices(d, role);
  if (turns.empty()) throw Error(Errc::RoleAbsent, role + " does not speak in dialogue " + d.id);
  return turns;
}

TrainingSample make_sample(const Dialogue& d, const std::string& role, int k, const Corpus& corpus,
                           const eval::AgentTemplates& templates) {
  const ContextView view = context_view(d, k, role);
  TrainingSample s;
  s.dialogue_id = d.id;
  s.image_id = d.image;
  s.target_turn_index = k;
  s.context = view.prior_turns;
  s.target = d.turns[static_cast<std::size_t>(k)].text;
  eval::SampleContext ctx;
  ctx.scenario = d.scenario;
  ctx.role = &corpus.require_character(role);
  if (view.other_role_id) ctx.other = &corpus.require_character(*view.other_role_id);
  ctx.image = &corpus.require_image(d.image);
  ctx.history = view.prior_turns;
  ctx.names[ctx.role->id] = ctx.role->name;
  if (ctx.other) ctx.names[ctx.other->id] = ctx.other->name;
  s.prompt = eval::build_agent_prompt(ctx, templates).text();
  return s;
}

}  // namespace

std::vector<TrainingSample> to_training_samples(const Dialogue& d, const std::string& role, const Corpus& corpus,
                                                const eval::AgentTemplates& templates) {
  if (d.split != Split::Train) {
    throw Error(Errc::PreconditionFailed, "dialogue " + d.id + " is in split " + std::string(to_string(d.split)) +
                                              ", training samples need Train");
  }
  std::vector<TrainingSample> out;
  for (int k : require_role_turns(d, role)) {
    auto s = make_sample(d, role, k, corpus, templates);
    s.id = compute_training_sample_id(d.id, role, k);
    out.push_back(std::move(s));
  }
  return out;
}

int select_test_turn(const Dialogue& d, const std::string& role, std::uint64_t seed) {
  const auto turns = require_role_turns(d, role);
  KeyedRng rng(seed, d.id);
  return turns[static_cast<std::size_t>(rng.below(turns.size()))];
}

TestSample to_test_sample(const Dialogue& d, const std::string& role, std::uint64_t seed, const Corpus& corpus,
                          const eval::AgentTemplates& templates) {
  if (d.split == Split::Train) {
    throw Error(Errc::PreconditionFailed, "dialogue " + d.id + " is in the Train split");
  }
  const int k = select_test_turn(d, role, seed);
  TestSample s;
  static_cast<TrainingSample&>(s) = make_sample(d, role, k, corpus, templates);
  s.id = compute_test_sample_id(d.id, role, k, seed);
  s.ground_truth = s.target;
  s.rng_seed = seed;
  return s;
}

std::vector<std::string> training_roles(const Dialogue& d) {
  std::vector<std::string> roles;
  if (d.scenario == Scenario::InterRole && !d.speaker_a.is_human()) roles.push_back(d.speaker_a.character_id());
  roles.push_back(d.speaker_b);
  return roles;
}

ConvertedCorpus convert_corpus(const Corpus& corpus, const eval::AgentTemplates& templates, std::uint64_t seed) {
  ConvertedCorpus out;
  for (const auto& d : corpus.dialogues()) {
    if (d.split == Split::Train) {
      for (const auto& role : training_roles(d)) {
        if (role_turn_indices(d, role).empty()) continue;
        auto samples = to_training_samples(d, role, corpus, templates);
        out.train.insert(out.train.end(), std::make_move_iterator(samples.begin()),
                         std::make_move_iterator(samples.end()));
      }
    } else {
      out.test.push_back(to_test_sample(d, d.speaker_b, seed, corpus, templates));
    }
  }
  return out;
}

}  // namespace forge::dataset
