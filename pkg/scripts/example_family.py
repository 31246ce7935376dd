"""Endomorphism classes of the state-split family and their minimal window sizes."""

import argparse
import time

from dillmaps.enumeration import build_example_family, enumerate_block_maps


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("m", type=int, nargs="?", default=3)
    p.add_argument("n", type=int, nargs="?", default=4)
    p.add_argument("--radius", type=int, default=None)
    p.add_argument("--variant", choices=["uniform", "nonuniform"], default="uniform")
    args = p.parse_args()
    s = build_example_family(args.m, args.n, args.variant)
    print(s.dumps())
    start = time.perf_counter()
    cs = enumerate_block_maps(s, s, args.radius if args.radius is not None else args.n)
    for c in range(len(cs)):
        print(f"class {c}: size={cs.class_size(c)} min_radius={cs.min_radius(c)}")
    print(f"classes={len(cs)} verified_to={cs.verify_len} elapsed={time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
