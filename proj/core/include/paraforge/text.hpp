#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace paraforge::text {

// Decodes UTF-8 into code points. Invalid bytes decode as U+FFFD and
// advance by one byte, so the decoder is total on arbitrary input.
std::vector<char32_t> decode_utf8(std::string_view s);

// Encodes a single code point as UTF-8 and appends it to `out`.
void append_utf8(std::u32string_view cps, std::string& out);
std::string encode_utf8(const std::vector<char32_t>& cps);

std::size_t codepoint_count(std::string_view s);

bool is_ascii_space(char32_t cp);
bool is_digit(char32_t cp);

// Letter/punctuation classification covers ASCII and Latin-1 explicitly;
// code points >= U+0100 count as letters (sufficient for the German and
// general-European text this pipeline handles).
bool is_letter(char32_t cp);
bool is_upper(char32_t cp);
bool is_punct(char32_t cp);

// Lowercases ASCII and the Latin-1 letter range. Other code points pass
// through unchanged.
char32_t to_lower(char32_t cp);
std::string lowercase(std::string_view s);

// Collapses runs of ASCII whitespace to single spaces and trims the ends.
// This is the project-wide meaning of "equal up to whitespace".
std::string normalize_whitespace(std::string_view s);

// Maximal runs of non-whitespace bytes.
std::vector<std::string> split_whitespace(std::string_view s);

}  // namespace paraforge::text
