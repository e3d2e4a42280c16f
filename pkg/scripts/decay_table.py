"""Print the decay-exponent table of the oscillatory integral families."""
import argparse

import numpy as np

from radcond import decayfit, oscint
from radcond.harness import table_cases


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r-min", type=float, default=1e2)
    ap.add_argument("--r-max", type=float, default=1e6)
    ap.add_argument("--points", type=int, default=13)
    ap.add_argument("--csv", help="also write (case, r, |I|) rows here")
    args = ap.parse_args()
    rs = np.logspace(np.log10(args.r_min), np.log10(args.r_max), args.points)
    rows = []
    print(f"{'case':48s} {'expected':>8s} {'envelope':>9s} {'lsq':>7s}")
    for name, spec, phi, scale in table_cases():
        mags = [abs(scale * oscint.eval_integral(spec.with_r(r), phi)) for r in rs]
        fit = decayfit.fit_decay(list(zip(rs, mags)))
        exp = oscint.expected_exponent(spec.cls, spec.m)
        print(f"{name:48s} {exp:8.3f} {fit.headline:9.3f} {fit.exponent:7.3f}")
        rows += [(name, r, m) for r, m in zip(rs, mags)]
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("case,r,magnitude\n")
            fh.writelines(f"{n},{r:.6e},{m:.6e}\n" for n, r, m in rows)


if __name__ == "__main__":
    main()
