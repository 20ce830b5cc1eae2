#include "forge/dataset/prompts.hpp"

namespace forge::dataset {

namespace {

constexpr const char* kFiveSections =
    "Use exactly these five headings, each on its own line followed by a colon:\n"
    "Brief Introduction:\nPersonality:\nLife Story:\nMain Interpersonal Relationships:\nCatchphrases:\n"
    "List each catchphrase on its own line starting with \"- \".";

}  // namespace

GenerationPrompts GenerationPrompts::defaults() {
  GenerationPrompts p;
  p.system = "You write careful, concrete character material for a role-playing dataset.";
  p.meta =
      "Invent {count} ordinary people who are not public figures. Make them differ in age, job, region, family "
      "situation and temperament, and cover as many different situations as possible.\n"
      "Number the entries 1 to {count}. For every entry give these four lines:\n"
      "Name: <full name>\nGender: <gender>\nPersonality: <one sentence>\nBackground: <one sentence>";
  p.expand = std::string(
                 "Expand the following person into a detailed character profile.\n"
                 "Name: {name}\nGender: {gender}\nPersonality: {personality_brief}\nBackground: {background_brief}\n\n") +
             kFiveSections;
  p.summarize = std::string(
                    "Write a character profile of {name} from {series} based on the reference text below.\n\n"
                    "Reference text:\n{source}\n\n") +
                kFiveSections;
  p.summarize_chunk =
      "This is part {part} of {parts} of a reference text about {name} from {series}. Take notes on everything "
      "it says about the character's personality, history, relationships and manner of speaking.\n\n{source}";
  p.merge = std::string(
                "Combine these notes about {name} from {series} into one character profile.\n\n{partials}\n\n") +
            kFiveSections;
  p.simplify =
      "Shorten the character profile below to at most {max_chars} characters while keeping the personality, key "
      "life events, relationships and catchphrases. Reply with the shortened profile only. (Attempt {attempt}; the "
      "previous attempt was {previous_chars} characters long.)\n\n{profile}";
  p.dialogue_system =
      "You are a dedicated role-playing assistant designed to immerse yourself fully in the character you are "
      "portraying. Please step into the shoes of {role_name} from {role_series}.";
  p.commentary =
      "Here is the profile of {role_name}:\n{role_profile}\n\n"
      "You are looking at the attached image.{image_notes}\n"
      "Write what {role_name} would say about it, in {language}, in the first person. Write the words only, with "
      "no actions, no narration and no introduction.";
  p.human_role =
      "Here is the profile of {role_name}:\n{role_profile}\n\n"
      "A curious human is looking at the attached image together with {role_name}.{image_notes}\n"
      "Write their conversation about the image in {language}: exactly {turn_pairs} exchanges, the human speaking "
      "first. Begin every line with \"Human:\" or \"{role_name}:\". Words only, no actions or narration.";
  p.inter_role =
      "Here is the profile of {role_name}:\n{role_profile}\n\n"
      "Here is the profile of {other_role_name}:\n{other_role_profile}\n\n"
      "{role_name} and {other_role_name} are looking at the attached image together.{image_notes}\n"
      "Write their conversation about the image in {language}: {turn_pairs} exchanges, either of them may start. "
      "Begin every line with \"{role_name}:\" or \"{other_role_name}:\". Words only, no actions or narration.";
  return p;
}

GenerationPrompts GenerationPrompts::from_json(const nlohmann::json& j) {
  GenerationPrompts p = defaults();
  auto take = [&](const char* key, std::string& field) {
    if (j.contains(key)) field = j.at(key).get<std::string>();
  };
  take("system", p.system);
  take("meta", p.meta);
  take("expand", p.expand);
  take("summarize", p.summarize);
  take("summarize_chunk", p.summarize_chunk);
  take("merge", p.merge);
  take("simplify", p.simplify);
  take("dialogue_system", p.dialogue_system);
  take("commentary", p.commentary);
  take("human_role", p.human_role);
  take("inter_role", p.inter_role);
  return p;
}

}  // namespace forge::dataset
