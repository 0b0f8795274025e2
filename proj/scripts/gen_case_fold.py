#!/usr/bin/env python3
"""Regenerates core/src/case_fold_table.inc (simple Unicode case folding)."""
import sys
import unicodedata


def simple_fold(ch: str) -> str:
    folded = ch.casefold()
    if len(folded) == 1:
        return folded
    lowered = ch.lower()
    if len(lowered) == 1:
        return lowered
    return ch


def main() -> None:
    pairs = []
    for cp in range(0x110000):
        if 0xD800 <= cp <= 0xDFFF:
            continue
        ch = chr(cp)
        folded = simple_fold(ch)
        if folded != ch:
            pairs.append((cp, ord(folded)))
    out = sys.stdout
    out.write("// Generated by scripts/gen_case_fold.py from Unicode %s. Do not edit.\n"
              % unicodedata.unidata_version)
    for cp, to in pairs:
        out.write("{0x%04X, 0x%04X},\n" % (cp, to))


if __name__ == "__main__":
    main()
