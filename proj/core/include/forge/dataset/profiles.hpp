#pragma once

#include <string>
#include <vector>

#include "forge/backend/client.hpp"
#include "forge/dataset/prompts.hpp"
#include "forge/domain/types.hpp"

namespace forge::dataset {

/// Backend records produced by a call, in call order.
using Trace = std::vector<backend::BackendRecord>;

/// Sends one request, appends its record to `trace` and returns the text;
/// BackendError when the final outcome is not Ok.
std::string call_backend(backend::BackendHandle& handle, const backend::ChatRequest& request, Trace* trace);

/// Numbered entries with Name/Gender/Personality/Background lines.
/// ParseError on a count mismatch or an entry lacking a field.
std::vector<MetaInfo> parse_meta_list(const std::string& text, std::size_t count);

/// Five headed sections; text before the first heading is ignored.
/// ParseError names a missing or empty section.
Profile parse_profile_sections(const std::string& text);

/// One backend call producing `count` meta entries.
std::vector<MetaInfo> generate_meta_batch(std::size_t count, backend::BackendHandle& handle,
                                          const GenerationPrompts& prompts, Trace* trace = nullptr,
                                          const std::string& batch_key = "0");

Profile expand_profile(const MetaInfo& meta, backend::BackendHandle& handle, const GenerationPrompts& prompts,
                       Trace* trace = nullptr);

/// Splits into pieces of at most `max_chars` code points, preferring
/// paragraph and then word boundaries.
std::vector<std::string> chunk_text(const std::string& text, std::size_t max_chars);

/// A source within `chunk_chars` is summarized in one call; longer sources
/// get one note-taking call per chunk and a final merge call.
Profile summarize_profile(const std::string& source_text, const std::string& name, const std::string& series,
                          backend::BackendHandle& handle, const GenerationPrompts& prompts,
                          std::size_t chunk_chars = 6000, Trace* trace = nullptr);

/// Sets `simplified`. When the full rendering already fits it is copied
/// without a backend call; otherwise up to `attempts` rewrites are requested
/// and LengthNotMet is thrown if none fits.
Profile simplify_profile(const Profile& profile, std::size_t max_chars, backend::BackendHandle& handle,
                         const GenerationPrompts& prompts, int attempts = 2, Trace* trace = nullptr,
                         const std::string& owner = "");

}  // namespace forge::dataset
