#include "forge/dataset/profiles.hpp"

#include <array>
#include <optional>

#include "forge/eval/templates.hpp"
#include "forge/util/error.hpp"
#include "forge/util/text.hpp"

namespace forge::dataset {

using backend::BackendHandle;
using backend::make_request;

std::string call_backend(BackendHandle& handle, const backend::ChatRequest& request, Trace* trace) {
  auto record = backend::complete(handle, request);
  if (trace) trace->push_back(record);
  return backend::require_ok(record);
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

/// Drops list and markdown decoration from the start of a line. Sets
/// `numbered` when a leading "N." or "N)" was removed.
std::string_view undecorate(std::string_view line, bool* numbered = nullptr) {
  if (numbered) *numbered = false;
  std::size_t i = 0;
  for (;;) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '#' || line[i] == '*' ||
                               line[i] == '-' || line[i] == '>' || line[i] == '_')) {
      ++i;
    }
    if (line.substr(i, 3) == "\xE2\x80\xA2") {
      i += 3;
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && is_digit(line[j])) ++j;
    if (j > i && j < line.size() && (line[j] == '.' || line[j] == ')')) {
      if (numbered) *numbered = true;
      i = j + 1;
      continue;
    }
    break;
  }
  return line.substr(i);
}

/// "key: value" where key (ASCII, case-insensitive) is one of `keys`.
std::optional<std::pair<std::size_t, std::string>> keyed_line(std::string_view line,
                                                              const std::vector<std::vector<std::string>>& keys) {
  const auto colon = line.find(':');
  const auto wide = line.find("\xEF\xBC\x9A");
  std::size_t sep = colon, sep_len = 1;
  if (wide != std::string_view::npos && (colon == std::string_view::npos || wide < colon)) {
    sep = wide;
    sep_len = 3;
  }
  if (sep == std::string_view::npos) return std::nullopt;
  std::string key = text::to_lower_ascii(text::trim(line.substr(0, sep)));
  while (!key.empty() && (key.back() == '*' || key.back() == '_')) key.pop_back();
  key = text::trim_copy(key);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    for (const auto& alias : keys[k]) {
      if (key == alias) {
        auto value = text::trim_copy(line.substr(sep + sep_len));
        while (!value.empty() && (value.front() == '*' || value.front() == '_')) value.erase(0, 1);
        return std::make_pair(k, text::trim_copy(value));
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<MetaInfo> parse_meta_list(const std::string& text, std::size_t count) {
  static const std::vector<std::vector<std::string>> kKeys = {
      {"name"}, {"gender", "sex"}, {"personality", "personality brief"}, {"background", "background brief"}};
  static const std::array<const char*, 4> kNames = {"name", "gender", "personality", "background"};
  std::vector<std::array<std::optional<std::string>, 4>> entries;
  for (const auto& raw : text::split_lines(text)) {
    bool numbered = false;
    const auto line = undecorate(raw, &numbered);
    const auto kv = keyed_line(line, kKeys);
    if (numbered || (kv && kv->first == 0 && (entries.empty() || entries.back()[0]))) entries.emplace_back();
    if (kv && !entries.empty()) entries.back()[kv->first] = kv->second;
  }
  // numbered lines that carried no fields at all are headings, not entries
  std::erase_if(entries, [](const auto& e) { return !e[0] && !e[1] && !e[2] && !e[3]; });
  if (entries.size() != count) {
    throw Error(Errc::ParseError, "expected " + std::to_string(count) + " meta entries, found " +
                                      std::to_string(entries.size()));
  }
  std::vector<MetaInfo> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (!entries[i][k] || entries[i][k]->empty()) {
        throw Error(Errc::ParseError, "meta entry " + std::to_string(i + 1) + " is missing " + kNames[k]);
      }
    }
    out.push_back(MetaInfo{*entries[i][0], *entries[i][1], *entries[i][2], *entries[i][3]});
  }
  return out;
}

namespace {

enum Section { kIntro, kPersonality, kLife, kRelations, kCatchphrases, kSectionCount };

constexpr std::array<const char*, kSectionCount> kSectionNames = {
    "Brief Introduction", "Personality", "Life Story", "Main Interpersonal Relationships", "Catchphrases"};

std::optional<std::pair<Section, std::string>> section_header(std::string_view raw) {
  static const std::vector<std::pair<std::string, Section>> kAliases = {
      {"brief introduction", kIntro},
      {"introduction", kIntro},
      {"\xE7\xAE\x80\xE4\xBB\x8B", kIntro},  // 简介
      {"personality", kPersonality},
      {"\xE6\x80\xA7\xE6\xA0\xBC", kPersonality},  // 性格
      {"life story", kLife},
      {"life experience", kLife},
      {"\xE7\x94\x9F\xE5\xB9\xB3", kLife},  // 生平
      {"main interpersonal relationships", kRelations},
      {"interpersonal relationships", kRelations},
      {"relationships", kRelations},
      {"\xE4\xB8\xBB\xE8\xA6\x81\xE4\xBA\xBA\xE9\x99\x85\xE5\x85\xB3\xE7\xB3\xBB", kRelations},  // 主要人际关系
      {"\xE4\xBA\xBA\xE9\x99\x85\xE5\x85\xB3\xE7\xB3\xBB", kRelations},                          // 人际关系
      {"catchphrases", kCatchphrases},
      {"catchphrase", kCatchphrases},
      {"\xE5\x8F\xA3\xE5\xA4\xB4\xE7\xA6\x85", kCatchphrases},  // 口头禅
  };
  const auto line = undecorate(raw);
  const auto lower = text::to_lower_ascii(line);
  for (const auto& [alias, section] : kAliases) {
    if (lower.compare(0, alias.size(), alias) != 0) continue;
    std::size_t i = alias.size();
    while (i < line.size() && (line[i] == '*' || line[i] == '_' || line[i] == ' ')) ++i;
    if (i == line.size()) return std::make_pair(section, std::string());
    if (line[i] == ':') return std::make_pair(section, text::trim_copy(line.substr(i + 1)));
    if (line.substr(i, 3) == "\xEF\xBC\x9A") return std::make_pair(section, text::trim_copy(line.substr(i + 3)));
  }
  return std::nullopt;
}

std::string strip_quotes(std::string s) {
  static const std::array<std::pair<std::string_view, std::string_view>, 4> kPairs = {{
      {"\"", "\""}, {"\xE2\x80\x9C", "\xE2\x80\x9D"}, {"'", "'"}, {"\xE2\x80\x98", "\xE2\x80\x99"}}};
  for (const auto& [open, close] : kPairs) {
    if (s.size() >= open.size() + close.size() && s.compare(0, open.size(), open) == 0 &&
        s.compare(s.size() - close.size(), close.size(), close) == 0) {
      return text::trim_copy(s.substr(open.size(), s.size() - open.size() - close.size()));
    }
  }
  return s;
}

}  // namespace

Profile parse_profile_sections(const std::string& text) {
  std::array<std::optional<std::vector<std::string>>, kSectionCount> sections;
  std::optional<Section> current;
  for (const auto& line : text::split_lines(text)) {
    if (auto header = section_header(line)) {
      if (sections[header->first]) {
        throw Error(Errc::ParseError, std::string("profile repeats section ") + kSectionNames[header->first]);
      }
      current = header->first;
      sections[*current].emplace();
      if (!header->second.empty()) sections[*current]->push_back(header->second);
      continue;
    }
    if (!current) continue;  // preamble
    const auto t = text::trim(line);
    if (!t.empty()) sections[*current]->push_back(std::string(t));
  }
  for (std::size_t s = 0; s < kSectionCount; ++s) {
    if (!sections[s]) throw Error(Errc::ParseError, std::string("profile is missing section ") + kSectionNames[s]);
    if (sections[s]->empty()) throw Error(Errc::ParseError, std::string("profile section ") + kSectionNames[s] + " is empty");
  }
  Profile p;
  p.brief_introduction = text::join(*sections[kIntro], "\n");
  p.personality = text::join(*sections[kPersonality], "\n");
  p.life_story = text::join(*sections[kLife], "\n");
  p.relationships = text::join(*sections[kRelations], "\n");
  for (const auto& line : *sections[kCatchphrases]) {
    auto phrase = strip_quotes(text::trim_copy(undecorate(line)));
    if (!phrase.empty()) p.catchphrases.push_back(std::move(phrase));
  }
  if (p.catchphrases.empty()) throw Error(Errc::ParseError, "profile section Catchphrases is empty");
  return p;
}

std::vector<MetaInfo> generate_meta_batch(std::size_t count, BackendHandle& handle, const GenerationPrompts& prompts,
                                          Trace* trace, const std::string& batch_key) {
  if (count < 1) throw Error(Errc::PreconditionFailed, "meta batch count must be at least 1");
  const auto body = eval::render_template(prompts.meta, {{"count", std::to_string(count)}});
  const auto reply = call_backend(
      handle, make_request(prompts.system, body, std::nullopt, "gen.meta/" + std::to_string(count) + "/" + batch_key, 0.7),
      trace);
  return parse_meta_list(reply, count);
}

Profile expand_profile(const MetaInfo& meta, BackendHandle& handle, const GenerationPrompts& prompts, Trace* trace) {
  for (const auto* field : {&meta.name, &meta.gender, &meta.personality_brief, &meta.background_brief}) {
    if (text::trim(*field).empty()) throw Error(Errc::PreconditionFailed, "meta info for '" + meta.name + "' is incomplete");
  }
  const auto body = eval::render_template(prompts.expand, {{"name", meta.name},
                                                           {"gender", meta.gender},
                                                           {"personality_brief", meta.personality_brief},
                                                           {"background_brief", meta.background_brief}});
  const auto reply =
      call_backend(handle, make_request(prompts.system, body, std::nullopt, "gen.expand/" + meta.name, 0.7), trace);
  return parse_profile_sections(reply);
}

std::vector<std::string> chunk_text(const std::string& source, std::size_t max_chars) {
  if (max_chars == 0) throw Error(Errc::InvalidArgument, "chunk size must be positive");
  std::vector<std::string> chunks;
  std::string_view rest = text::trim(source);
  while (!rest.empty()) {
    if (text::char_count(rest) <= max_chars) {
      chunks.emplace_back(rest);
      break;
    }
    const std::string_view window = text::prefix_chars(rest, max_chars);
    std::size_t cut = window.rfind("\n\n");
    if (cut == std::string_view::npos || cut < window.size() / 2) {
      const auto space = window.find_last_of(" \n\t");
      cut = (space != std::string_view::npos && space >= window.size() / 2) ? space : window.size();
    }
    chunks.emplace_back(text::trim(window.substr(0, cut)));
    rest = text::trim(rest.substr(cut));
  }
  std::erase_if(chunks, [](const std::string& c) { return c.empty(); });
  return chunks;
}

Profile summarize_profile(const std::string& source_text, const std::string& name, const std::string& series,
                          BackendHandle& handle, const GenerationPrompts& prompts, std::size_t chunk_chars,
                          Trace* trace) {
  if (text::trim(source_text).empty()) {
    throw Error(Errc::PreconditionFailed, "source text for " + name + " is empty");
  }
  if (text::char_count(source_text) <= chunk_chars) {
    const auto body =
        eval::render_template(prompts.summarize, {{"name", name}, {"series", series}, {"source", source_text}});
    return parse_profile_sections(
        call_backend(handle, make_request(prompts.system, body, std::nullopt, "gen.summary/" + name), trace));
  }
  const auto chunks = chunk_text(source_text, chunk_chars);
  std::vector<std::string> notes;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const auto body = eval::render_template(prompts.summarize_chunk, {{"name", name},
                                                                      {"series", series},
                                                                      {"source", chunks[i]},
                                                                      {"part", std::to_string(i + 1)},
                                                                      {"parts", std::to_string(chunks.size())}});
    notes.push_back("Notes " + std::to_string(i + 1) + ":\n" +
                    call_backend(handle,
                                 make_request(prompts.system, body, std::nullopt,
                                              "gen.summary.chunk/" + name + "/" + std::to_string(i + 1)),
                                 trace));
  }
  const auto body =
      eval::render_template(prompts.merge, {{"name", name}, {"series", series}, {"partials", text::join(notes, "\n\n")}});
  return parse_profile_sections(
      call_backend(handle, make_request(prompts.system, body, std::nullopt, "gen.summary.merge/" + name), trace));
}

Profile simplify_profile(const Profile& profile, std::size_t max_chars, BackendHandle& handle,
                         const GenerationPrompts& prompts, int attempts, Trace* trace, const std::string& owner) {
  if (max_chars == 0) throw Error(Errc::InvalidArgument, "max_chars must be positive");
  if (attempts < 1) throw Error(Errc::InvalidArgument, "simplify needs at least one attempt");
  Profile out = profile;
  const std::string full = render_profile(profile);
  const std::size_t full_chars = text::char_count(full);
  if (full_chars <= max_chars) {
    out.simplified = full;
    return out;
  }
  std::size_t previous = full_chars;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    const auto body = eval::render_template(prompts.simplify, {{"max_chars", std::to_string(max_chars)},
                                                               {"profile", full},
                                                               {"attempt", std::to_string(attempt)},
                                                               {"previous_chars", std::to_string(previous)}});
    const auto reply = text::trim_copy(call_backend(
        handle,
        make_request(prompts.system, body, std::nullopt,
                     "gen.simplify/" + owner + "/" + std::to_string(attempt) + "/" + std::to_string(max_chars)),
        trace));
    const std::size_t n = text::char_count(reply);
    if (!reply.empty() && n <= max_chars) {
      out.simplified = reply;
      return out;
    }
    previous = n;
  }
  throw Error(Errc::LengthNotMet, "simplified profile" + (owner.empty() ? std::string() : " for " + owner) +
                                      " still exceeds " + std::to_string(max_chars) + " characters after " +
                                      std::to_string(attempts) + " attempts");
}

}  // namespace forge::dataset
