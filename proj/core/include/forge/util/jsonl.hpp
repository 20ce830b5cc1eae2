#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace forge {

using json = nlohmann::json;

/// Reads one JSON value per non-empty line. Errors carry file:line.
std::vector<json> read_jsonl(const std::filesystem::path& path);
json read_json(const std::filesystem::path& path);
std::string read_text(const std::filesystem::path& path);

/// Writes through a sibling temp file and renames, so readers never see a
/// half-written file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& rows);
void write_json(const std::filesystem::path& path, const json& value);

/// Canonical JSONL text (sorted keys, one record per line, trailing newline).
std::string to_jsonl_text(const std::vector<json>& rows);

template <typename T>
std::vector<json> to_rows(const std::vector<T>& items) {
  std::vector<json> rows;
  rows.reserve(items.size());
  for (const auto& item : items) rows.push_back(to_json(item));
  return rows;
}

}  // namespace forge
