#include "obc/unicode.hpp"

#include <algorithm>
#include <cstdint>

#include "obc/errors.hpp"

namespace obc::uni {

namespace {

struct CpRange {
    uint32_t lo, hi;
};
struct CpMap {
    uint32_t from, to;
};
struct ComposePair {
    uint32_t starter, mark, composed;
};

#include "unicode_tables.inc"

template <size_t N>
bool in_ranges(const CpRange (&table)[N], char32_t cp) {
    const CpRange* end = table + N;
    const CpRange* it = std::lower_bound(
        table, end, cp, [](const CpRange& r, char32_t c) { return r.hi < static_cast<uint32_t>(c); });
    return it != end && it->lo <= static_cast<uint32_t>(cp);
}

template <size_t N>
uint32_t map_lookup(const CpMap (&table)[N], char32_t cp, uint32_t fallback) {
    const CpMap* end = table + N;
    const CpMap* it = std::lower_bound(
        table, end, cp, [](const CpMap& m, char32_t c) { return m.from < static_cast<uint32_t>(c); });
    if (it != end && it->from == static_cast<uint32_t>(cp)) return it->to;
    return fallback;
}

int combining_class(char32_t cp) {
    return static_cast<int>(map_lookup(kCombiningClass, cp, 0));
}

char32_t compose_pair(char32_t starter, char32_t mark) {
    auto key = [](const ComposePair& p) {
        return (static_cast<uint64_t>(p.starter) << 32) | p.mark;
    };
    uint64_t want = (static_cast<uint64_t>(starter) << 32) | static_cast<uint64_t>(mark);
    const ComposePair* end = kCompose + std::size(kCompose);
    const ComposePair* it =
        std::lower_bound(kCompose, end, want,
                         [&](const ComposePair& p, uint64_t w) { return key(p) < w; });
    if (it != end && key(*it) == want) return static_cast<char32_t>(it->composed);
    return 0;
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    size_t i = 0;
    const auto fail = [&](const char* what) {
        throw InvalidUtf8Error(std::string(what) + " at byte " + std::to_string(i));
    };
    while (i < s.size()) {
        unsigned char b0 = static_cast<unsigned char>(s[i]);
        char32_t cp;
        size_t len;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            fail("invalid UTF-8 lead byte");
            return out;
        }
        if (i + len > s.size()) fail("truncated UTF-8 sequence");
        for (size_t k = 1; k < len; ++k) {
            unsigned char b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) fail("invalid UTF-8 continuation byte");
            cp = (cp << 6) | (b & 0x3F);
        }
        static const char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMin[len]) fail("overlong UTF-8 sequence");
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("invalid code point");
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
}

std::string encode_utf8(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : s) out += encode_utf8(cp);
    return out;
}

bool is_space(char32_t cp) { return in_ranges(kSpace, cp); }
bool is_upper(char32_t cp) { return in_ranges(kUppercase, cp); }
bool is_digit(char32_t cp) { return in_ranges(kDigit, cp); }
bool is_punct_or_symbol(char32_t cp) { return in_ranges(kPunctOrSymbol, cp); }
bool is_open_quote_or_paren(char32_t cp) { return in_ranges(kOpenOrInitialQuote, cp); }

char32_t to_lower(char32_t cp) { return static_cast<char32_t>(map_lookup(kLowerMap, cp, cp)); }
char32_t to_upper(char32_t cp) { return static_cast<char32_t>(map_lookup(kUpperMap, cp, cp)); }

std::u32string nfc(std::u32string_view s) {
    std::u32string buf(s);

    // Canonical reordering: stable sort of each nonzero-ccc run.
    size_t i = 0;
    while (i < buf.size()) {
        if (combining_class(buf[i]) == 0) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < buf.size() && combining_class(buf[j]) != 0) ++j;
        std::stable_sort(buf.begin() + i, buf.begin() + j,
                         [](char32_t a, char32_t b) { return combining_class(a) < combining_class(b); });
        i = j;
    }

    // Canonical composition (UAX #15): compose each character with the last
    // starter unless blocked by an intervening mark of >= combining class.
    // last_ccc is -1 while the starter is the most recently appended char.
    std::u32string out;
    out.reserve(buf.size());
    ptrdiff_t last_starter = -1;
    int last_ccc = -1;
    for (char32_t cp : buf) {
        int ccc = combining_class(cp);
        if (last_starter >= 0 && last_ccc < ccc) {
            if (char32_t comp = compose_pair(out[last_starter], cp)) {
                out[last_starter] = comp;
                continue;
            }
        }
        out.push_back(cp);
        if (ccc == 0) {
            last_starter = static_cast<ptrdiff_t>(out.size()) - 1;
            last_ccc = -1;
        } else {
            last_ccc = ccc;
        }
    }
    return out;
}

std::string normalize_lower(std::string_view s) {
    std::u32string u = nfc(decode_utf8(s));
    for (char32_t& cp : u) cp = to_lower(cp);
    return encode_utf8(u);
}

}  // namespace obc::uni
