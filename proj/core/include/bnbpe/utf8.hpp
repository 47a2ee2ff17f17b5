#pragma once

#include <string>
#include <string_view>

namespace bnbpe {

// Ill-formed sequences decode to U+FFFD.
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view codepoints);

void append_utf8(std::string& out, char32_t cp);

// Decodes the code point starting at byte offset `pos` and advances `pos`.
char32_t next_codepoint(std::string_view text, std::size_t& pos);

std::size_t count_codepoints(std::string_view text);

}  // namespace bnbpe
