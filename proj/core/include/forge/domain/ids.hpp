#pragma once

#include <string>

#include "forge/domain/types.hpp"

namespace forge {

// Content-hash identifiers. A record's id is derived from the fields that
// define its identity, so regenerating the same record yields the same id.
//
// Characters hash only name/series/category/language: profiles are refined
// (simplified, hand-edited) after creation and must keep their id.

std::string compute_id(const Character& c);
std::string compute_id(const ImageRecord& image);
std::string compute_id(const Dialogue& d);
std::string compute_training_sample_id(const std::string& dialogue_id, const std::string& role, int turn_index);
std::string compute_test_sample_id(const std::string& dialogue_id, const std::string& role, int turn_index,
                                   std::uint64_t seed);

/// Returns the record with its id field recomputed.
Character with_id(Character c);
ImageRecord with_id(ImageRecord image);
Dialogue with_id(Dialogue d);

}  // namespace forge
