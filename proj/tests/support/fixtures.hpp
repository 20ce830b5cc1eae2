#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <functional>
#include <map>
#include <memory>

#include "forge/backend/client.hpp"
#include "forge/domain/corpus.hpp"
#include "forge/domain/types.hpp"
#include "forge/eval/trajectory.hpp"
#include "forge/util/error.hpp"
#include "forge/util/rng.hpp"

namespace forge::testkit {

Profile profile_for(const std::string& name);

Character make_character(const std::string& name, const std::string& series = "The Salt Road",
                         Split split = Split::Train, Language language = Language::En);

ImageRecord generic_image(const std::string& uri);
ImageRecord related_image(const std::string& uri, const Character& owner);

Dialogue commentary(const Character& role, const ImageRecord& image, const std::string& text,
                    Split split = Split::Train);

/// Alternating HumanUser / role turns, HumanUser first.
Dialogue human_role(const Character& role, const ImageRecord& image, int turns, Split split = Split::Train);

/// `opener` speaks turn 0; speaker_a is always `partner`.
Dialogue inter_role(const Character& role, const Character& partner, const ImageRecord& image, int turns,
                    bool role_opens, Split split = Split::Train);

/// A valid dialogue of a random scenario and length drawn from `rng`.
Dialogue random_dialogue(KeyedRng& rng, const Corpus& corpus, int index);

/// Utterance stitched from clean sentences and the artifacts the filter
/// targets (stage directions, wrappers, fillers, assistant tone, other
/// scripts), placed at random.
std::string fuzz_utterance(KeyedRng& rng);

/// random_dialogue with every turn replaced by fuzz_utterance.
Dialogue fuzz_dialogue(KeyedRng& rng, const Corpus& corpus, int index);

/// Two series of two Train characters each, plus generic images.
Corpus small_corpus();

std::vector<eval::MetricAssessment> assessments(const std::vector<eval::ScorePair>& pairs);

/// The strict "<Abbrev>: ... Scores: a b" layout.
std::string strict_judge_text(const std::vector<eval::ScorePair>& pairs);

/// Full names, markdown and loose score phrasing.
std::string lenient_judge_text(const std::vector<eval::ScorePair>& pairs);

std::vector<eval::ScorePair> random_pairs(KeyedRng& rng);

/// agents x samples strict trajectories from one judge.
std::vector<eval::EvaluationTrajectory> synthetic_trajectories(std::size_t agents, std::size_t samples,
                                                               const std::string& judge, std::uint64_t seed);

/// Answers each request with `reply(request)`; counts calls.
class FnBackend final : public backend::ChatBackend {
 public:
  using Reply = std::function<std::string(const backend::ChatRequest&)>;
  explicit FnBackend(Reply reply) : reply_(std::move(reply)) {}
  backend::AttemptResult send(const backend::ChatRequest& request, const std::string& digest) override;
  std::string kind() const override { return "fn"; }
  int calls = 0;

 private:
  Reply reply_;
};

/// Handle with retries that never sleep.
std::unique_ptr<backend::BackendHandle> make_handle(std::shared_ptr<backend::ChatBackend> b, int attempts = 3,
                                                    const std::string& name = "test");

/// relative path -> sha256 of every file under `dir`; manifest.json is
/// hashed with its wall-clock fields removed.
std::map<std::string, std::string> tree_digest(const std::filesystem::path& dir);

/// Fresh, empty directory under the system temp dir.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace forge::testkit

/// Asserts that `stmt` throws forge::Error with code `expected_errc`.
#define EXPECT_ERRC(stmt, expected_errc) \
  do {                                                                                     \
    try {                                                                                  \
      stmt;                                                                                \
      ADD_FAILURE() << "expected " #expected_errc " from " #stmt; \
    } catch (const ::forge::Error& forge_e_) {                                             \
      EXPECT_EQ(forge_e_.code(), expected_errc) << forge_e_.what(); \
    }                                                                                      \
  } while (0)
