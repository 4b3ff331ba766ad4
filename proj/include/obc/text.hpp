#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace obc::text {

// Half-open span in code point offsets.
struct Span {
    size_t begin = 0;
    size_t end = 0;

    bool operator==(const Span&) const = default;
};

// Lowercased, NFC-normalized, whitespace-split tokens with leading and
// trailing punctuation/symbols stripped. Interior punctuation stays, so
// "a/h1n1" and "3.5" survive as single tokens. No stemming, no stop-word
// removal.
std::vector<std::string> tokenize(std::u32string_view s);
std::vector<std::string> tokenize(std::string_view utf8);

// Splits after '.', '!', '?' or U+2026 when followed by whitespace and then
// an uppercase letter, a digit or an opening quote/paren, or at end of text.
// A newline always ends the sentence. Each span starts at the first
// non-whitespace character after the previous boundary, so spans partition
// [0, len) and whitespace-only tails attach to the preceding sentence.
// Boundaries falling strictly inside any of `protected_spans` are dropped
// (the surrounding fragments stay one sentence).
std::vector<Span> segment_sentences(std::u32string_view plain,
                                    const std::vector<Span>& protected_spans = {});

}  // namespace obc::text
