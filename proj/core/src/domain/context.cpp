#include "forge/domain/context.hpp"

#include "forge/util/error.hpp"

namespace forge {

ContextView context_view(const Dialogue& dialogue, int turn_index) {
  if (turn_index < 0 || turn_index >= static_cast<int>(dialogue.turns.size())) {
    throw Error(Errc::IndexOutOfRange, "turn " + std::to_string(turn_index) + " of dialogue " + dialogue.id +
                                           " with " + std::to_string(dialogue.turns.size()) + " turns");
  }
  const Turn& turn = dialogue.turns[static_cast<std::size_t>(turn_index)];
  if (turn.speaker.is_human()) {
    throw Error(Errc::WrongSpeaker, "turn " + std::to_string(turn_index) + " of dialogue " + dialogue.id +
                                        " is spoken by the human user");
  }
  ContextView view;
  view.image_id = dialogue.image;
  view.scenario = dialogue.scenario;
  view.role_id = turn.speaker.character_id();
  if (dialogue.scenario == Scenario::InterRole) {
    view.other_role_id = view.role_id == dialogue.speaker_b ? dialogue.speaker_a.character_id() : dialogue.speaker_b;
  }
  view.prior_turns.assign(dialogue.turns.begin(), dialogue.turns.begin() + turn_index);
  return view;
}

ContextView context_view(const Dialogue& dialogue, int turn_index, const std::string& role_id) {
  ContextView view = context_view(dialogue, turn_index);
  if (view.role_id != role_id) {
    throw Error(Errc::WrongSpeaker, "turn " + std::to_string(turn_index) + " of dialogue " + dialogue.id +
                                        " is not spoken by " + role_id);
  }
  return view;
}

std::vector<int> role_turn_indices(const Dialogue& dialogue, const std::string& role_id) {
  std::vector<int> out;
  for (const auto& t : dialogue.turns) {
    if (!t.speaker.is_human() && t.speaker.character_id() == role_id) out.push_back(t.index);
  }
  return out;
}

}  // namespace forge
