#include "obc/text.hpp"

#include "obc/unicode.hpp"

namespace obc::text {

std::vector<std::string> tokenize(std::u32string_view s) {
    std::u32string norm = uni::nfc(s);
    for (char32_t& cp : norm) cp = uni::to_lower(cp);

    std::vector<std::string> tokens;
    size_t i = 0;
    const size_t n = norm.size();
    while (i < n) {
        while (i < n && uni::is_space(norm[i])) ++i;
        size_t j = i;
        while (j < n && !uni::is_space(norm[j])) ++j;
        if (j > i) {
            size_t a = i, b = j;
            while (a < b && uni::is_punct_or_symbol(norm[a])) ++a;
            while (b > a && uni::is_punct_or_symbol(norm[b - 1])) --b;
            if (b > a) tokens.push_back(uni::encode_utf8(std::u32string_view(norm).substr(a, b - a)));
        }
        i = j;
    }
    return tokens;
}

std::vector<std::string> tokenize(std::string_view utf8) {
    return tokenize(uni::decode_utf8(utf8));
}

namespace {

bool is_terminator(char32_t cp) {
    return cp == U'.' || cp == U'!' || cp == U'?' || cp == U'…';
}

bool starts_new_sentence(char32_t cp) {
    return uni::is_upper(cp) || uni::is_digit(cp) || uni::is_open_quote_or_paren(cp);
}

bool inside_any(const std::vector<Span>& spans, size_t pos) {
    for (const Span& s : spans) {
        if (s.begin < pos && pos < s.end) return true;
    }
    return false;
}

}  // namespace

std::vector<Span> segment_sentences(std::u32string_view plain,
                                    const std::vector<Span>& protected_spans) {
    const size_t n = plain.size();

    // Boundary positions: index of the first code point of the next sentence.
    std::vector<size_t> boundaries;
    size_t i = 0;
    while (i < n) {
        bool cut = false;
        if (plain[i] == U'\n') {
            cut = true;
        } else if (is_terminator(plain[i]) && i + 1 < n && uni::is_space(plain[i + 1])) {
            size_t k = i + 1;
            while (k < n && uni::is_space(plain[k])) ++k;
            if (k == n || starts_new_sentence(plain[k])) cut = true;
        }
        if (cut) {
            size_t next = i + 1;
            while (next < n && uni::is_space(plain[next])) ++next;
            if (next < n && !inside_any(protected_spans, next)) boundaries.push_back(next);
            i = next;
        } else {
            ++i;
        }
    }

    // All-whitespace input carries no sentence.
    bool any_content = false;
    for (char32_t cp : plain) {
        if (!uni::is_space(cp)) {
            any_content = true;
            break;
        }
    }
    if (!any_content) return {};

    std::vector<Span> spans;
    size_t start = 0;
    for (size_t b : boundaries) {
        spans.push_back({start, b});
        start = b;
    }
    spans.push_back({start, n});
    return spans;
}

}  // namespace obc::text
