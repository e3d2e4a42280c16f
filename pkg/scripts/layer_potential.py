"""Layer potential of a rapidly decaying line density: scaled field and residual per radius."""
import argparse
import math

from radcond import potential
from radcond.harness import THETA_GRID, layer_density


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--r", type=float, nargs="+", default=[1e2, 1e3, 1e4])
    ap.add_argument("--L", type=float, default=1e3)
    args = ap.parse_args()
    H, h, k = 1.0, 0.5, 1.0
    dens = layer_density(k, H)
    L = max(args.L, 10 * math.sqrt(max(args.r)))
    pts = [(r * math.cos(t), H + r * math.sin(t)) for r in args.r for t in THETA_GRID]
    u, res = potential.uprc_field_and_residual(dens, pts, L, k, H, h)
    n = len(THETA_GRID)
    for i, r in enumerate(args.r):
        fu = max(abs(v.value) for v in u[i * n:(i + 1) * n]) * math.sqrt(r)
        fr = max(abs(v.value) for v in res[i * n:(i + 1) * n]) * r ** 1.5
        print(f"r={r:8.3g}  max r^1/2|u|={fu:.4g}  max r^3/2|res|={fr:.4g}  nodes={u[0].n_nodes}")


if __name__ == "__main__":
    main()
