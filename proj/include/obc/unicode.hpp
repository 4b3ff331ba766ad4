#pragma once

#include <string>
#include <string_view>

namespace obc::uni {

// UTF-8 <-> UTF-32. decode throws InvalidUtf8Error on malformed input.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
std::string encode_utf8(char32_t cp);

bool is_space(char32_t cp);
bool is_upper(char32_t cp);
bool is_digit(char32_t cp);
bool is_punct_or_symbol(char32_t cp);
bool is_open_quote_or_paren(char32_t cp);

char32_t to_lower(char32_t cp);
char32_t to_upper(char32_t cp);

// Canonical reordering + canonical composition over the table range
// (BMP < U+3000, which covers Latin scripts incl. full precomposed
// Vietnamese). Text that is already NFC passes through unchanged.
std::u32string nfc(std::u32string_view s);

// Convenience: NFC + lowercase over a UTF-8 string.
std::string normalize_lower(std::string_view s);

}  // namespace obc::uni
