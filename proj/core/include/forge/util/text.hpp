#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace forge::text {

/// Decodes UTF-8 into code points. Invalid bytes decode as U+FFFD.
std::vector<char32_t> decode_utf8(std::string_view s);
std::string encode_utf8(char32_t cp);

/// Number of code points; used for every user-facing "character count".
std::size_t char_count(std::string_view s);

/// Longest prefix holding at most `max_chars` code points.
std::string_view prefix_chars(std::string_view s, std::size_t max_chars);

std::string_view trim(std::string_view s);
std::string trim_copy(std::string_view s);
std::string to_lower_ascii(std::string_view s);

/// Case-insensitive (ASCII) substring search; npos when absent.
std::size_t ifind(std::string_view haystack, std::string_view needle, std::size_t from = 0);

std::vector<std::string> split_lines(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Collapses runs of blanks to one space, removes blanks before , . ! ? ; :
/// and trims each line; blank lines are dropped.
std::string tidy_spacing(std::string_view s);

bool is_cjk(char32_t cp);
bool is_punctuation_or_symbol(char32_t cp);
bool is_word_char(char32_t cp);

enum class Script { Latin, Cjk, Other };

/// Letter counts per script family; digits and punctuation are ignored.
struct ScriptProfile {
  std::size_t latin = 0;
  std::size_t cjk = 0;
  std::size_t other = 0;
  std::size_t letters() const { return latin + cjk + other; }
};
ScriptProfile script_profile(std::string_view s);

}  // namespace forge::text
