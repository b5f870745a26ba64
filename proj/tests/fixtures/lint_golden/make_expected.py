#!/usr/bin/env python3
"""Writes expected.tsv: the findings each recorded file must parse to under
the default ignore list (C0111, C0326, R0201), in (line, column, code,
symbol, message) order. Kept independent of the C++ parser."""

import glob
import json
import os

IGNORED = {"C0111", "C0326", "R0201"}
CATEGORY = {"E": "error", "R": "refactor", "W": "warning", "C": "convention", "F": "fatal", "I": "info"}

rows = []
for path in sorted(glob.glob(os.path.join(os.path.dirname(__file__) or ".", "*.lint.json"))):
    stem = os.path.basename(path)[: -len(".lint.json")]
    messages = json.load(open(path))
    kept = [m for m in messages if m["message-id"] not in IGNORED]
    kept.sort(key=lambda m: (m["line"], m["column"], m["message-id"], m["symbol"], m["message"]))
    for m in kept:
        rows.append("\t".join([stem, m["message-id"], CATEGORY[m["message-id"][0]], m["symbol"],
                               str(m["line"]), str(m["column"])]))
    dropped = len(messages) - len(kept)
    rows.append("\t".join([stem, "#dropped", str(dropped)]))

with open(os.path.join(os.path.dirname(__file__) or ".", "expected.tsv"), "w") as out:
    out.write("\n".join(rows) + "\n")
