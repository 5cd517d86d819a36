#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace stutter::unicode {

// NFC-normalizes UTF-8 text. Invalid sequences are replaced with U+FFFD.
std::string to_nfc(std::string_view utf8);

std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view text);
void append_utf8(std::string& out, char32_t cp);

// Number of Unicode scalar values in a UTF-8 string.
std::size_t length(std::string_view utf8);

// Detects a UTF-8 / UTF-16LE / UTF-16BE byte order mark and returns the
// content as UTF-8 without the BOM. Input without a BOM is taken as UTF-8.
std::string bytes_to_utf8(std::string_view bytes);

bool is_space(char32_t cp);

// ASCII-only case fold; other scalars are returned unchanged.
std::string fold_case(std::string_view utf8);

}  // namespace stutter::unicode
