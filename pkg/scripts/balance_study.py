"""Growth of the measured discrepancy D with the horizon.

For a substitution whose second eigenvalue mu exceeds one, D grows like
n ** (log|mu| / log lambda). The script prints D at increasing horizons,
the fitted growth exponent, and the horizon at which D would cross a
threshold if the fitted power law continues.
"""

import argparse
import math

import numpy as np

from dillmaps.dill import from_substitution, invariants
from dillmaps.substitution import load_substitution


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("subst", nargs="?", default="data/unbalanced.sub")
    p.add_argument("--horizons", type=int, nargs="+", default=[1000, 3000, 10_000, 30_000, 100_000])
    p.add_argument("--threshold", type=float, default=64.0)
    args = p.parse_args()
    s = load_substitution(args.subst)
    d = from_substitution(s)
    mods = sorted((float(m) for m in abs(np.linalg.eigvals(np.array(s.matrix, dtype=float)))), reverse=True)
    predicted = math.log(mods[1]) / math.log(mods[0]) if mods[1] > 1 else 0.0
    print(f"eigenvalue moduli {[round(m, 6) for m in mods]}  predicted exponent {predicted:.3f}")
    rows = []
    for h in args.horizons:
        rep = invariants(d, horizon=h, threshold=args.threshold)
        rows.append((h, rep.D_observed))
        print(f"horizon={h:>7}  Z={rep.Z_estimate:.6f}  D={rep.D_observed:8.3f}  bounded={rep.D_bounded}")
    logs = np.log(np.array(rows, dtype=float))
    slope, intercept = np.polyfit(logs[:, 0], logs[:, 1], 1)
    print(f"fitted exponent {slope:.3f}")
    if slope > 0:
        cross = math.exp((math.log(args.threshold) - intercept) / slope)
        print(f"power law reaches D={args.threshold:g} near horizon {cross:.3g}")


if __name__ == "__main__":
    main()
