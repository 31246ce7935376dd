"""Conjugate shift powers (optionally after a bit flip) by a substitution and report the result."""

import argparse
import math
import time

from dillmaps.conjugation import conjugate_step, reduce_to_representative, trajectory
from dillmaps.dill import almost_inverse, compose, from_block_map, from_substitution, shift_rule, symbol_rule
from dillmaps.substitution import load_substitution


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("subst", nargs="?", default="data/thue_morse.sub")
    p.add_argument("--max-n", type=int, default=16)
    p.add_argument("--flip", action="store_true", help="compose with the letter swap first (two letters)")
    args = p.parse_args()
    s = load_substitution(args.subst)
    inv, tau = almost_inverse(s), from_substitution(s)
    base = from_block_map(symbol_rule(s, s, {0: 1, 1: 0})) if args.flip else None
    start = time.perf_counter()
    for n in range(1, args.max_n + 1):
        f = shift_rule(s, n).as_dill()
        if base is not None:
            f = compose(f, base)
        g = conjugate_step(inv, f, tau)
        t = trajectory(f, s, s, rho_inv=inv, horizon=1000)
        rep = reduce_to_representative(t)
        half = math.ceil(n / 2)
        print(f"n={n:2d}  I: {f.in_radius} -> {g.in_radius}  (ceil(n/2)={half})  "
              f"cycle={t.cycle}  k={rep.k} {rep.direction}")
    print(f"elapsed {time.perf_counter() - start:.2f}s")


if __name__ == "__main__":
    main()
