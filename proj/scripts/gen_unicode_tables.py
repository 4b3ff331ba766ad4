#!/usr/bin/env python3
"""Regenerates src/unicode_tables.inc from Python's unicodedata.

The tables cover the BMP range needed for Latin-script text (Vietnamese
included): simple case mappings, category ranges used by the tokenizer and
sentence segmenter, combining classes, and canonical composition pairs.
Run from the repository root:

    python3 scripts/gen_unicode_tables.py > src/unicode_tables.inc
"""

import sys
import unicodedata

CASE_LIMIT = 0x2000
CLASS_LIMIT = 0x3000


def ranges(predicate, limit):
    out = []
    start = None
    for cp in range(limit):
        if predicate(cp):
            if start is None:
                start = cp
        elif start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, limit - 1))
    return out


def emit_ranges(name, rs):
    print(f"static const CpRange {name}[] = {{")
    for i in range(0, len(rs), 6):
        row = ", ".join(f"{{0x{a:04X}, 0x{b:04X}}}" for a, b in rs[i : i + 6])
        print(f"    {row},")
    print("};")
    print()


def emit_pairs(name, pairs):
    print(f"static const CpMap {name}[] = {{")
    for i in range(0, len(pairs), 6):
        row = ", ".join(f"{{0x{a:04X}, 0x{b:04X}}}" for a, b in pairs[i : i + 6])
        print(f"    {row},")
    print("};")
    print()


def cat(cp):
    return unicodedata.category(chr(cp))


def main():
    print("// Generated by scripts/gen_unicode_tables.py "
          f"(Unicode {unicodedata.unidata_version}). Do not edit by hand.")
    print()

    lower_map = []
    upper_map = []
    for cp in range(0x41, CASE_LIMIT):
        c = chr(cp)
        lc = c.lower()
        if len(lc) == 1 and ord(lc) != cp:
            lower_map.append((cp, ord(lc)))
        uc = c.upper()
        if len(uc) == 1 and ord(uc) != cp:
            upper_map.append((cp, ord(uc)))
    emit_pairs("kLowerMap", lower_map)
    emit_pairs("kUpperMap", upper_map)

    emit_ranges("kUppercase", ranges(lambda cp: cat(cp) == "Lu", CLASS_LIMIT))
    emit_ranges("kDigit", ranges(lambda cp: cat(cp) == "Nd", CLASS_LIMIT))
    emit_ranges(
        "kPunctOrSymbol",
        ranges(lambda cp: cat(cp)[0] in "PS", CLASS_LIMIT),
    )
    emit_ranges(
        "kSpace",
        ranges(lambda cp: chr(cp).isspace() or cat(cp) == "Zs", CLASS_LIMIT),
    )
    emit_ranges(
        "kOpenOrInitialQuote",
        ranges(
            lambda cp: cat(cp) in ("Ps", "Pi") or cp in (0x22, 0x27),
            CLASS_LIMIT,
        ),
    )

    ccc = []
    for cp in range(CLASS_LIMIT):
        c = unicodedata.combining(chr(cp))
        if c:
            ccc.append((cp, c))
    emit_pairs("kCombiningClass", ccc)

    # Canonical composition pairs: primary composites whose decomposition is
    # two codepoints, excluding anything outside the covered range.
    pairs = []
    for cp in range(CLASS_LIMIT):
        d = unicodedata.decomposition(chr(cp))
        if not d or d.startswith("<"):
            continue
        parts = d.split()
        if len(parts) != 2:
            continue
        a, b = int(parts[0], 16), int(parts[1], 16)
        if a >= CLASS_LIMIT or b >= CLASS_LIMIT:
            continue
        # Skip composition exclusions: a character is excluded when NFC of
        # its decomposition does not give the character back.
        if unicodedata.normalize("NFC", chr(a) + chr(b)) != chr(cp):
            continue
        pairs.append(((a, b), cp))
    pairs.sort()
    print("static const ComposePair kCompose[] = {")
    for i in range(0, len(pairs), 4):
        row = ", ".join(
            f"{{0x{a:04X}, 0x{b:04X}, 0x{c:04X}}}" for (a, b), c in pairs[i : i + 4]
        )
        print(f"    {row},")
    print("};")


if __name__ == "__main__":
    sys.exit(main())
