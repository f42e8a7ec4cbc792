#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 decoding plus the small amount of Unicode character knowledge the
// pipeline needs: whitespace (same set as Python's str.isspace), letters of
// the Latin, Greek and Cyrillic blocks (plus CJK ideographs), script
// classification and simple case mapping for those scripts.
namespace mtprep::utf8 {

// Byte offset of the first invalid sequence, or nullopt when `s` is valid.
// Overlong encodings, surrogates and code points above U+10FFFF are invalid.
std::optional<std::size_t> find_invalid(std::string_view s);
inline bool valid(std::string_view s) { return !find_invalid(s).has_value(); }

// Decodes the code point starting at `pos` and advances `pos` past it.
// Input must be valid UTF-8.
char32_t next(std::string_view s, std::size_t& pos);

// Throws DataError (with the byte offset) on invalid input.
std::u32string decode(std::string_view s);

void append(std::string& out, char32_t c);
std::string encode(char32_t c);
std::string encode(std::u32string_view s);

// Number of code points.
std::size_t length(std::string_view s);

bool is_space(char32_t c);
bool is_letter(char32_t c);
bool is_mark(char32_t c);
inline bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }
inline bool is_alnum(char32_t c) { return is_letter(c) || is_digit(c); }

enum class Script { Latin, Cyrillic, Other };
Script script_of(char32_t c);

char32_t to_lower(char32_t c);
char32_t to_upper(char32_t c);

// Full-string lowercasing. Matches Python's str.lower() on Latin, Greek and
// Cyrillic text, including the two-code-point expansion of U+0130, but not
// the context-sensitive final sigma rule.
std::string lower(std::string_view s);

// Splits on runs of Unicode whitespace, dropping empty pieces (Python's
// str.split() with no argument).
std::vector<std::string_view> split_ws(std::string_view s);

// Strips Unicode whitespace from the right end (Python's str.rstrip()).
std::string_view rstrip(std::string_view s);

}  // namespace mtprep::utf8
