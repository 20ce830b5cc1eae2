#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace forge::demo::data {

std::vector<nlohmann::json> characters();
std::vector<nlohmann::json> images();
/// Reference text for the summarized character.
std::string source_text();

}  // namespace forge::demo::data
