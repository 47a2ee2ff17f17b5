#!/usr/bin/env python3
"""Freezes NFKC reference outputs from Python's unicodedata into a fixture.

The C++ normalizer is backed by ICU; this fixture gives the tests an
independent implementation to agree with. Only code points assigned in
Python's Unicode version are sampled, since normalization of assigned
characters is stable across later Unicode versions.
"""

import argparse
import json
import pathlib
import random
import unicodedata

POOLS = [
    (0x0980, 0x09FF, 8),   # Bengali
    (0x0964, 0x0965, 1),   # dandas
    (0x0020, 0x007E, 3),   # ASCII
    (0x00A0, 0x00FF, 1),   # Latin-1 (NBSP, superscripts, fractions)
    (0x0300, 0x036F, 1),   # combining diacritics
    (0x1E00, 0x1EFF, 1),   # Latin extended additional
    (0x2000, 0x206F, 1),   # general punctuation, spaces
    (0x2150, 0x218F, 1),   # number forms
    (0x2460, 0x24FF, 1),   # enclosed alphanumerics
    (0x3300, 0x33FF, 1),   # CJK compatibility
    (0xAC00, 0xAC40, 1),   # Hangul syllables
    (0x1100, 0x11FF, 1),   # Hangul jamo
    (0xFB00, 0xFB4F, 1),   # alphabetic presentation forms
    (0xFF00, 0xFFEF, 2),   # halfwidth/fullwidth
    (0x1F300, 0x1F5FF, 1), # pictographs
    (0x200C, 0x200D, 1),   # joiners
]


def assigned(cp):
    return unicodedata.category(chr(cp)) not in ("Cn", "Cs")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent
                                         / "tests" / "data" / "nfkc_oracle.jsonl"))
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    pools = []
    for lo, hi, weight in POOLS:
        cps = [cp for cp in range(lo, hi + 1) if assigned(cp)]
        pools.append((cps, weight))
    weights = [w for _, w in pools]

    rng = random.Random(args.seed)
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(json.dumps({"unicode_version": unicodedata.unidata_version}) + "\n")
        for _ in range(args.count):
            n = rng.randint(1, 16)
            s = "".join(chr(rng.choice(rng.choices(pools, weights=weights)[0][0])) for _ in range(n))
            f.write(json.dumps({"in": s, "nfkc": unicodedata.normalize("NFKC", s)},
                               ensure_ascii=True) + "\n")


if __name__ == "__main__":
    main()
