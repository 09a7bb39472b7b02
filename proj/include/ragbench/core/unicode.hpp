#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ragbench::unicode {

// Decodes UTF-8 into scalar values. Malformed bytes decode to U+FFFD one
// byte at a time so the mapping is total and deterministic.
std::vector<char32_t> decode(std::string_view utf8);

void append_utf8(std::string& out, char32_t cp);
std::string encode(const std::vector<char32_t>& scalars);

// Unicode whitespace (the White_Space property list).
bool is_space(char32_t cp);

// ASCII punctuation plus the common Unicode punctuation blocks
// (general punctuation, CJK symbols, fullwidth forms).
bool is_punct(char32_t cp);

// Lowercase for ASCII, Latin-1 supplement, and basic Cyrillic.
// Other scripts pass through unchanged.
char32_t to_lower(char32_t cp);

std::string lowercase(std::string_view utf8);

// Number of scalar values in the string.
std::size_t scalar_count(std::string_view utf8);

} // namespace ragbench::unicode
