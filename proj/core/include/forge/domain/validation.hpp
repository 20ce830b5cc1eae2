#pragma once

#include <string>
#include <vector>

#include "forge/domain/corpus.hpp"
#include "forge/domain/types.hpp"

namespace forge {

struct Violation {
  std::string record_id;
  std::string rule;
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Violations are data: validators never throw for invariant breaches.
struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  void add(std::string record_id, std::string rule, std::string message);
  void merge(const ValidationReport& other);
  bool has_rule(std::string_view rule) const;
};

ValidationReport validate_profile(const Profile& profile, const std::string& owner_id);
ValidationReport validate_character(const Character& character);
ValidationReport validate_meta_info(const MetaInfo& meta, const std::string& label);
ValidationReport validate_image(const ImageRecord& image);

/// Structural rules only: turn indices, alternation and per-scenario shape.
ValidationReport validate_dialogue(const Dialogue& dialogue);

/// Cross-record rules: references resolve, character-related images belong to
/// a participant, inter-role speakers share a series, languages agree, and
/// out-of-distribution characters stay out of other splits.
ValidationReport validate_corpus(const Corpus& corpus);

ValidationReport validate_training_samples(const std::vector<TrainingSample>& samples, const Corpus& corpus);
ValidationReport validate_test_samples(const std::vector<TestSample>& samples, const Corpus& corpus);

}  // namespace forge
