#!/usr/bin/env python3
"""Writes tests/data/extraction_fixture.jsonl: strings with known emoji tokens.

Hand-written cases come first. The rest splice sequences drawn from
emoji-test.txt between ASCII filler, so the expected tokens are known by
construction; each generated line is also checked against a brute-force
longest match before it is kept.
"""
import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
TABLE = ROOT / "data" / "unicode" / "emoji-test.txt"
OUT = ROOT / "tests" / "data" / "extraction_fixture.jsonl"
TOTAL = 200

HAND = [
    ("#crypto price changes last 4 hours \U0001F680 $BTC \U0001F441️\U0001F441️\U0001F449",
     ["\U0001F680", "\U0001F441️", "\U0001F441️", "\U0001F449"]),
    ("\U0001F1E8\U0001F1E6\U0001F525", ["\U0001F1E8\U0001F1E6", "\U0001F525"]),
    ("1", []),
    ("1️", []),
    ("price 1️⃣ up", ["1️⃣"]),
    ("#BTC #️⃣", ["#️⃣"]),
    ("no emoji here", []),
    ("", []),
    ("❤️❤", ["❤️", "❤"]),
    ("\U0001F44D\U0001F3FD\U0001F44D", ["\U0001F44D\U0001F3FD", "\U0001F44D"]),
    ("\U0001F468‍\U0001F469‍\U0001F467‍\U0001F466!", ["\U0001F468‍\U0001F469‍\U0001F467‍\U0001F466"]),
    ("\U0001F441️‍\U0001F5E8️", ["\U0001F441️‍\U0001F5E8️"]),
    ("\U0001F3F4\U000E0067\U000E0062\U000E0065\U000E006E\U000E0067\U000E007F go",
     ["\U0001F3F4\U000E0067\U000E0062\U000E0065\U000E006E\U000E0067\U000E007F"]),
    ("\U0001F1FA\U0001F1F8\U0001F1E8\U0001F1E6", ["\U0001F1FA\U0001F1F8", "\U0001F1E8\U0001F1E6"]),
    ("⚠️ warning \U0001F4B0\U0001F4B0", ["⚠️", "\U0001F4B0", "\U0001F4B0"]),
    ("\U0001F914‍", ["\U0001F914"]),
    ("to the moon\U0001F680\U0001F680\U0001F680", ["\U0001F680"] * 3),
    ("\U0001F3FB", ["\U0001F3FB"]),
    ("©️ 2019", ["©️"]),
    ("\U0001F469\U0001F3FE‍\U0001F4BB", ["\U0001F469\U0001F3FE‍\U0001F4BB"]),
]

FILLER = ["", " ", "  ", "$BTC ", "#crypto ", "price 42 ", "to the moon ", "ok,", "(", ")", "?!", "buy\n", "\t"]
# First code points that would extend a preceding sequence under longest match.
JOINERS = {0x200D, 0xFE0F, 0xFE0E, 0x20E3} | set(range(0x1F3FB, 0x1F400)) | set(range(0xE0020, 0xE0080))


def load_sequences():
    seqs = []
    for line in TABLE.read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#") or ";" not in line:
            continue
        cps = line.split(";", 1)[0].split()
        seqs.append("".join(chr(int(c, 16)) for c in cps))
    return seqs


def brute_force(text, table, longest):
    tokens, i = [], 0
    while i < len(text):
        for length in range(min(longest, len(text) - i), 0, -1):
            if text[i:i + length] in table:
                tokens.append(text[i:i + length])
                i += length
                break
        else:
            i += 1
    return tokens


def main():
    rng = random.Random(20190308)
    seqs = load_sequences()
    table = set(seqs)
    longest = max(map(len, seqs))
    starters = [s for s in seqs if ord(s[0]) not in JOINERS]

    lines = []
    for text, tokens in HAND:
        assert brute_force(text, table, longest) == tokens, text
        lines.append({"text": text, "tokens": tokens})
    while len(lines) < TOTAL:
        parts, tokens = [rng.choice(FILLER)], []
        for _ in range(rng.randint(1, 6)):
            seq = rng.choice(starters)
            parts.append(seq)
            tokens.append(seq)
            parts.append(rng.choice(FILLER) if rng.random() < 0.7 else "")
        text = "".join(parts)
        if brute_force(text, table, longest) != tokens:
            continue  # adjacent pieces fused into a longer sequence
        lines.append({"text": text, "tokens": tokens})

    with OUT.open("w", encoding="utf-8") as f:
        for line in lines:
            f.write(json.dumps(line, ensure_ascii=False) + "\n")
    print(f"wrote {len(lines)} cases to {OUT}", file=sys.stderr)


if __name__ == "__main__":
    main()
