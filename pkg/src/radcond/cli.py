"""Command line front end: one subcommand per campaign kind, plus ``all``."""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import harness
from .errors import ParameterError

COMMANDS = {
    "verify-integrals": "integral-table",
    "verify-radiation": "radiation",
    "verify-part-a": "part-a",
    "verify-fb": "fb",
    "verify-kernels": "kernels",
    "verify-perturb": "perturb",
    "verify-specfun": "specfun",
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="radcond", description="Run verification campaigns and report verdicts.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, kind in list(COMMANDS.items()) + [("all", "all")]:
        p = sub.add_parser(name, help=f"run the {kind} campaign" if kind != "all" else "run every campaign")
        p.add_argument("--config", help="JSON campaign file (for 'all': {\"campaigns\": [...]})")
        p.add_argument("--out", help="write the report here")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--r-min", type=float, default=None)
        p.add_argument("--r-max", type=float, default=None)
        p.add_argument("--r-points", type=int, default=None)
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--quiet", action="store_true", help="suppress per-check lines")
    return ap


def _load_config(path):
    if not path:
        return {}
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise SystemExit(f"radcond: cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise SystemExit(f"radcond: {path} is not valid JSON: {exc}")


def _campaign(kind: str, base: dict, args) -> harness.Campaign:
    d = dict(base)
    d.setdefault("name", kind)
    d["kind"] = kind
    if args.seed is not None:
        d["seed"] = args.seed
    d["jobs"] = max(1, args.jobs)
    if any(v is not None for v in (args.r_min, args.r_max, args.r_points)):
        default = harness.Campaign(kind, kind).r_grid or [1e2, 1e4]
        lo = args.r_min if args.r_min is not None else default[0]
        hi = args.r_max if args.r_max is not None else default[-1]
        n = args.r_points if args.r_points is not None else len(default)
        d["r_grid"] = list(np.logspace(np.log10(lo), np.log10(hi), n))
    return harness.Campaign.from_dict(d)


def _print_checks(rep: harness.Report, out=sys.stdout):
    for c in rep.checks:
        fitted = c.fitted["headline"] if isinstance(c.fitted, dict) and "headline" in c.fitted else c.fitted
        shown = "n/a" if fitted is None else f"{fitted:.4g}"
        print(f"[{c.verdict.upper():>13}] {c.claim_anchor}: {shown} ({c.comparison} {c.tolerance:g})", file=out)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _load_config(args.config)
    try:
        if args.command == "all":
            given = {c["kind"]: c for c in cfg.get("campaigns", [])}
            reports = []
            for kind in harness.KINDS:
                rep = harness.run_campaign(_campaign(kind, given.get(kind, {}), args))
                if not args.quiet:
                    _print_checks(rep)
                reports.append(rep)
            rep = harness.merge_reports("all", reports)
        else:
            kind = COMMANDS[args.command]
            if cfg.get("kind", kind) != kind:
                raise ParameterError(f"config is for kind {cfg['kind']!r}, not {kind!r}")
            rep = harness.run_campaign(_campaign(kind, cfg, args))
            if not args.quiet:
                _print_checks(rep)
    except ParameterError as exc:
        print(f"radcond: {exc}", file=sys.stderr)
        return 1
    if args.out:
        harness.emit_report(rep, args.format, args.out)
    n = len(rep.checks)
    n_pass = sum(c.passed for c in rep.checks)
    n_ind = sum(c.verdict == "indeterminate" for c in rep.checks)
    print(f"{n_pass}/{n} checks passed, {n_ind} indeterminate, {n - n_pass - n_ind} failed")
    return rep.exit_code()


if __name__ == "__main__":
    sys.exit(main())
