"""Count endomorphism classes up to shift for several substitutions and radii."""

import argparse
import time

from dillmaps.enumeration import enumerate_block_maps
from dillmaps.substitution import load_substitution


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("substs", nargs="*",
                   default=["data/thue_morse.sub", "data/fibonacci.sub", "data/tribonacci.sub"])
    p.add_argument("--max-radius", type=int, default=3)
    args = p.parse_args()
    for path in args.substs:
        s = load_substitution(path)
        for r in range(args.max_radius + 1):
            start = time.perf_counter()
            cs = enumerate_block_maps(s, s, r)
            sizes = [cs.class_size(c) for c in range(len(cs))]
            print(f"{path}  r={r}  classes={len(cs)}  sizes={sizes}  "
                  f"verified_to={cs.verify_len}  {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
