"""Sweep one mode field over rays and radii; print the scaled field and residual.

Example: python scripts/radiation_sweep.py --k 1 --regime propagating --weight sqrt
"""
import argparse
import math

import numpy as np

from radcond import decayfit, modes
from radcond.harness import THETA_GRID, regime_densities, widest_delta


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=float, default=1.0)
    ap.add_argument("--regime", default="propagating", help="prefix of a regime label, e.g. cutoff-left")
    ap.add_argument("--weight", choices=("sqrt", "abs", "smooth"), default="sqrt")
    ap.add_argument("--r", type=float, nargs="+", default=[10, 100, 1000, 10000])
    ap.add_argument("--csv")
    args = ap.parse_args()
    cfg = modes.ProblemConfig(k=args.k, delta=widest_delta(args.k))
    a0 = cfg.singular_set[-1]
    picks = [(n, j, g) for n, j, g in regime_densities(cfg, a0) if n.startswith(args.regime)]
    if not picks:
        raise SystemExit(f"no regime {args.regime!r} at k={args.k}")
    name, j, g = picks[0]
    print(f"k={args.k:.4g} delta={cfg.delta:.4g} regime={name} j={j} weight={args.weight}")
    rows, fields, resids = [], [], []
    for r in args.r:
        fv, rv = 0.0, 0.0
        for th in THETA_GRID:
            x = modes.polar_point(cfg, r, th)
            if x[1] < cfg.H + cfg.h:
                continue
            v = modes.synth_mode_field(args.weight, j, g, cfg, a0, x)
            res = modes.radiation_residual(args.weight, j, g, cfg, a0, r, th)
            fv, rv = max(fv, abs(v) * math.sqrt(r)), max(rv, abs(res) * r ** 1.5)
            rows.append((r, th, v, res))
        fields.append(fv)
        resids.append(rv)
        print(f"r={r:10.4g}  max r^1/2|v|={fv:.4g}  max r^3/2|res|={rv:.4g}")
    print(f"growth: field {decayfit.growth_ratio(fields):.3g}, residual {decayfit.growth_ratio(resids):.3g}")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("r,theta_star,re,im,res_re,res_im\n")
            for r, th, v, res in rows:
                fh.write(f"{r:.6e},{th:.6f},{v.real:.6e},{v.imag:.6e},{res.real:.6e},{res.imag:.6e}\n")


if __name__ == "__main__":
    main()
