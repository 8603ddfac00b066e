#!/usr/bin/env python3
"""Regenerate data/dictionary.txt from the pyspellchecker English frequency list.

Keeps lowercase alphabetic entries only and writes `word count` lines sorted by
descending count, then lexicographically.

    pip install pyspellchecker==0.9.1
    python3 tools/make_dictionary.py > data/dictionary.txt
"""
import gzip
import json
import os
import re
import sys

import spellchecker


def main() -> int:
    path = os.path.join(os.path.dirname(spellchecker.__file__), "resources", "en.json.gz")
    with gzip.open(path) as fh:
        freq = json.load(fh)
    rows = sorted(
        ((w, int(c)) for w, c in freq.items() if re.fullmatch(r"[a-z]+", w)),
        key=lambda wc: (-wc[1], wc[0]),
    )
    out = sys.stdout
    for word, count in rows:
        out.write(f"{word} {count}\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
