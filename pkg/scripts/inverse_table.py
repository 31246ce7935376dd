"""Print the almost inverse of a substitution next to the 5-letter contexts it decides."""

import argparse

from dillmaps.dill import almost_inverse
from dillmaps.recognizer import build_recognizer
from dillmaps.substitution import load_substitution


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("subst", nargs="?", default="data/thue_morse.sub")
    args = p.parse_args()
    s = load_substitution(args.subst)
    inv = almost_inverse(s)
    rec = build_recognizer(s)
    fmt = s.alphabet.format
    print(f"almost inverse: in_radius={inv.in_radius} windows={len(inv.table)}")
    print(f"symmetric recognizer: radius={rec.radius}")
    k = inv.in_radius + 1
    # every admissible word of the recognizer's window length, read from its first letter
    for w in sorted(rec.table):
        print(f"  {fmt(w)} ... -> {fmt(inv.table[w[:k]])}")


if __name__ == "__main__":
    main()
