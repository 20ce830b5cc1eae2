#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/domain/types.hpp"

namespace forge {

/// What a role-playing agent sees before producing the turn at `turn_index`:
/// the image, the role's profile (plus the partner's for inter-role) and the
/// turns already spoken.
struct ContextView {
  std::string image_id;
  Scenario scenario = Scenario::Commentary;
  std::string role_id;
  std::optional<std::string> other_role_id;
  std::vector<Turn> prior_turns;

  /// Number of profiles the agent conditions on (1, or 2 for inter-role).
  std::size_t profile_count() const { return other_role_id ? 2 : 1; }
};

/// The role is whoever speaks turn `turn_index`; throws IndexOutOfRange, or
/// WrongSpeaker when that turn belongs to the human user.
ContextView context_view(const Dialogue& dialogue, int turn_index);

/// Same, but additionally requires the turn to be spoken by `role_id`.
ContextView context_view(const Dialogue& dialogue, int turn_index, const std::string& role_id);

/// Indices of the turns spoken by `role_id`, in order.
std::vector<int> role_turn_indices(const Dialogue& dialogue, const std::string& role_id);

}  // namespace forge
