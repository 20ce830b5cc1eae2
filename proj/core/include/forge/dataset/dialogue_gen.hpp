#pragma once

#include <string>
#include <vector>

#include "forge/backend/client.hpp"
#include "forge/dataset/profiles.hpp"
#include "forge/dataset/prompts.hpp"
#include "forge/domain/types.hpp"

namespace forge::dataset {

struct DialogueRequest {
  Scenario scenario = Scenario::Commentary;
  /// The role-played character (speaker_b).
  const Character* role = nullptr;
  /// Inter-role partner (speaker_a).
  const Character* partner = nullptr;
  const ImageRecord* image = nullptr;
  Split split = Split::Train;
  /// Exchanges requested for multi-turn scenarios.
  int turn_pairs = 3;
  /// Distinguishes repeated generations for the same (characters, image).
  int variant = 0;
};

/// PreconditionFailed unless the request is coherent: inter-role needs two
/// distinct same-series characters; a character-related image must belong to
/// one of the participants.
void check_dialogue_request(const DialogueRequest& request);

backend::ChatRequest dialogue_chat_request(const DialogueRequest& request, const GenerationPrompts& prompts);

/// Turns a generated reply into a dialogue. Commentary replies are one
/// utterance; transcripts are "<Label>: text" lines where the label is
/// "Human" or a participant's name. ParseError for unusable text,
/// StructureError when the turns break the scenario's shape.
Dialogue parse_dialogue_reply(const DialogueRequest& request, const std::string& reply);

Dialogue generate_dialogue(const DialogueRequest& request, backend::BackendHandle& handle,
                           const GenerationPrompts& prompts, Trace* trace = nullptr);

}  // namespace forge::dataset
