#include "forge/dataset/dialogue_gen.hpp"

#include <optional>

#include "forge/domain/ids.hpp"
#include "forge/domain/validation.hpp"
#include "forge/eval/templates.hpp"
#include "forge/util/error.hpp"
#include "forge/util/text.hpp"

namespace forge::dataset {

void check_dialogue_request(const DialogueRequest& r) {
  if (!r.role || !r.image) throw Error(Errc::PreconditionFailed, "dialogue request needs a character and an image");
  if (r.scenario == Scenario::InterRole) {
    if (!r.partner) throw Error(Errc::PreconditionFailed, "inter-role dialogue needs two characters");
    if (r.partner->id == r.role->id) throw Error(Errc::PreconditionFailed, "inter-role characters must differ");
    if (r.partner->series != r.role->series) {
      throw Error(Errc::PreconditionFailed, "inter-role characters " + r.role->name + " and " + r.partner->name +
                                                " are from different series");
    }
  } else if (r.partner) {
    throw Error(Errc::PreconditionFailed, std::string(to_string(r.scenario)) + " dialogue takes one character");
  }
  if (r.image->kind == ImageKind::CharacterRelated) {
    const auto& owner = r.image->owner_character;
    const bool owned = owner && (*owner == r.role->id || (r.partner && *owner == r.partner->id));
    if (!owned) {
      throw Error(Errc::PreconditionFailed, "image " + r.image->id + " belongs to another character");
    }
  }
  if (r.scenario != Scenario::Commentary && r.turn_pairs < 1) {
    throw Error(Errc::PreconditionFailed, "turn_pairs must be at least 1");
  }
}

namespace {

std::string image_notes(const ImageRecord& image) {
  if (!image.annotation) return "";
  std::string notes;
  if (!image.annotation->characters.empty()) {
    notes += " Characters in the image: " + text::join(image.annotation->characters, ", ") + ".";
  }
  if (!image.annotation->place.empty()) notes += " Place: " + image.annotation->place + ".";
  if (!image.annotation->scene.empty()) notes += " Scene: " + image.annotation->scene + ".";
  return notes;
}

const std::string& body_for(Scenario s, const GenerationPrompts& p) {
  switch (s) {
    case Scenario::Commentary: return p.commentary;
    case Scenario::HumanRole: return p.human_role;
    case Scenario::InterRole: return p.inter_role;
  }
  return p.commentary;
}

std::string request_tag(const DialogueRequest& r) {
  std::string tag = "gen.dialogue/" + std::string(to_string(r.scenario)) + "/" + r.role->id;
  if (r.partner) tag += "+" + r.partner->id;
  tag += "/" + r.image->id + "/" + std::to_string(r.variant);
  return tag;
}

}  // namespace

backend::ChatRequest dialogue_chat_request(const DialogueRequest& r, const GenerationPrompts& prompts) {
  check_dialogue_request(r);
  std::map<std::string, std::string> v = {
      {"role_name", r.role->name},
      {"role_series", r.role->series},
      {"role_profile", prompt_profile_text(r.role->profile)},
      {"image_notes", image_notes(*r.image)},
      {"language", std::string(language_name(r.role->language))},
      {"turn_pairs", std::to_string(r.turn_pairs)},
      {"other_role_name", r.partner ? r.partner->name : ""},
      {"other_role_profile", r.partner ? prompt_profile_text(r.partner->profile) : ""},
      {"variant", std::to_string(r.variant)},
  };
  auto body = eval::render_template(body_for(r.scenario, prompts), v);
  // Repeated generations for the same pair need distinct requests.
  if (r.variant > 0) body += "\n\n(Variation " + std::to_string(r.variant) + ": make this conversation different.)";
  return backend::make_request(eval::render_template(prompts.dialogue_system, v), body, r.image->uri, request_tag(r),
                               0.7);
}

namespace {

struct Label {
  Speaker speaker;
  std::string rest;
};

std::string normalize_label(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '*' || c == '_' || c == '#' || c == '[' || c == ']') continue;
    out += c;
  }
  return text::to_lower_ascii(text::trim(out));
}

std::optional<Label> match_label(std::string_view line, const DialogueRequest& r) {
  const auto ascii = line.find(':');
  const auto wide = line.find("\xEF\xBC\x9A");
  std::size_t sep = ascii, len = 1;
  if (wide != std::string_view::npos && (ascii == std::string_view::npos || wide < ascii)) {
    sep = wide;
    len = 3;
  }
  if (sep == std::string_view::npos || sep > 80) return std::nullopt;
  const auto label = normalize_label(line.substr(0, sep));
  auto rest = text::trim_copy(line.substr(sep + len));
  while (!rest.empty() && (rest.front() == '*' || rest.front() == '_')) rest.erase(0, 1);
  rest = text::trim_copy(rest);
  if (r.scenario == Scenario::HumanRole) {
    if (label == "human" || label == "user" || label == "human user" || label == "\xE4\xBA\xBA\xE7\xB1\xBB") {
      return Label{Speaker::human(), rest};
    }
    if (label == text::to_lower_ascii(r.role->name) || label == "character") {
      return Label{Speaker::character(r.role->id), rest};
    }
    return std::nullopt;
  }
  if (label == text::to_lower_ascii(r.role->name)) return Label{Speaker::character(r.role->id), rest};
  if (r.partner && label == text::to_lower_ascii(r.partner->name)) return Label{Speaker::character(r.partner->id), rest};
  return std::nullopt;
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return text::trim_copy(s.substr(1, s.size() - 2));
  if (s.size() >= 6 && s.compare(0, 3, "\xE2\x80\x9C") == 0 && s.compare(s.size() - 3, 3, "\xE2\x80\x9D") == 0) {
    return text::trim_copy(s.substr(3, s.size() - 6));
  }
  return s;
}

}  // namespace

Dialogue parse_dialogue_reply(const DialogueRequest& r, const std::string& reply) {
  check_dialogue_request(r);
  Dialogue d;
  d.scenario = r.scenario;
  d.image = r.image->id;
  d.speaker_b = r.role->id;
  d.speaker_a = r.scenario == Scenario::InterRole ? Speaker::character(r.partner->id) : Speaker::human();
  d.language = r.role->language;
  d.split = r.split;

  if (r.scenario == Scenario::Commentary) {
    std::string t = text::trim_copy(reply);
    if (auto label = match_label(t, DialogueRequest{Scenario::InterRole, r.role, nullptr, r.image})) {
      t = label->rest;
    }
    t = unquote(text::trim_copy(t));
    if (t.empty()) throw Error(Errc::ParseError, "commentary reply is empty");
    d.turns.push_back(Turn{Speaker::character(r.role->id), t, 0});
    return with_id(std::move(d));
  }

  std::vector<Turn> turns;
  for (const auto& line : text::split_lines(reply)) {
    const auto t = text::trim(line);
    if (t.empty()) continue;
    if (auto label = match_label(t, r)) {
      turns.push_back(Turn{label->speaker, unquote(label->rest), static_cast<int>(turns.size())});
    } else if (!turns.empty()) {
      turns.back().text += (turns.back().text.empty() ? "" : " ") + std::string(t);
    }
    // unlabelled text before the first turn is preamble
  }
  if (turns.empty()) throw Error(Errc::ParseError, "reply contains no labelled turns");
  for (auto& t : turns) {
    t.text = unquote(text::trim_copy(t.text));
    if (t.text.empty()) throw Error(Errc::ParseError, "turn " + std::to_string(t.index) + " is empty");
  }
  d.turns = std::move(turns);
  d = with_id(std::move(d));
  const auto report = validate_dialogue(d);
  if (!report.ok()) {
    throw Error(Errc::StructureError, std::string(to_string(r.scenario)) + " transcript: " +
                                          report.violations.front().message);
  }
  return d;
}

Dialogue generate_dialogue(const DialogueRequest& request, backend::BackendHandle& handle,
                           const GenerationPrompts& prompts, Trace* trace) {
  const auto chat = dialogue_chat_request(request, prompts);
  return parse_dialogue_reply(request, call_backend(handle, chat, trace));
}

}  // namespace forge::dataset
