"""Cell H^1 norms of mode sums against the cell index, with fitted exponents."""
import argparse
import math

from radcond import decayfit
from radcond.harness import cell_indices, part_a_norms


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid-density", type=int, default=24)
    ap.add_argument("--j-max", type=int, default=256)
    args = ap.parse_args()
    js = cell_indices(4, args.j_max)
    plans = [("sqrt", [-2, -1, 0, 1, 2]), ("abs", [-2, -1, 0, 1, 2]), ("smooth", [-2, 0, 2])]
    span = math.log10((1 + js[-1]) / (1 + js[0]))
    for weight, ms in plans:
        norms = part_a_norms(weight, ms, js, args.grid_density)
        fit = decayfit.fit_decay([(1 + j, n) for j, n in zip(js, norms)], min_decades=span)
        print(f"{weight:7s} modes {ms}: exponent {fit.exponent:.3f} (envelope {fit.headline:.3f})")
        for j, n in zip(js, norms):
            print(f"   j={j:4d}  {n:.4e}")


if __name__ == "__main__":
    main()
