#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "forge/domain/corpus.hpp"
#include "forge/domain/types.hpp"
#include "forge/eval/templates.hpp"

namespace forge::dataset {

/// One sample per turn spoken by `role`, each with the strict prefix as
/// context. PreconditionFailed unless the dialogue is in the Train split;
/// RoleAbsent when `role` never speaks.
std::vector<TrainingSample> to_training_samples(const Dialogue& dialogue, const std::string& role,
                                                const Corpus& corpus, const eval::AgentTemplates& templates);

/// Picks one of `role`'s turns uniformly with a generator keyed by
/// (seed, dialogue id). PreconditionFailed for a Train dialogue.
TestSample to_test_sample(const Dialogue& dialogue, const std::string& role, std::uint64_t seed, const Corpus& corpus,
                          const eval::AgentTemplates& templates);

/// The turn index to_test_sample would choose.
int select_test_turn(const Dialogue& dialogue, const std::string& role, std::uint64_t seed);

/// Characters whose turns become training samples: the role (speaker_b)
/// and, for inter-role dialogues, the partner as well.
std::vector<std::string> training_roles(const Dialogue& dialogue);

struct ConvertedCorpus {
  std::vector<TrainingSample> train;
  std::vector<TestSample> test;
};

/// Train dialogues give training samples for every training role; each test
/// dialogue gives exactly one test sample for its speaker_b.
ConvertedCorpus convert_corpus(const Corpus& corpus, const eval::AgentTemplates& templates, std::uint64_t seed);

}  // namespace forge::dataset
