"""Verification campaigns: sweeps, decay fits and pass/fail verdicts.

Each campaign kind runs a fixed family of checks.  A check carries a claim id,
the fitted number, what it is compared against, and a verdict.  Quadrature
budget failures give an "indeterminate" verdict instead of aborting.
"""
from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, asdict
from typing import Any, Callable, Optional

import numpy as np

from . import bump, decayfit, fbt, modes, oscint, perturb, potential, specfun
from .errors import ConvergenceError, DegeneracyError, InsufficientData, ParameterError

KINDS = ("integral-table", "radiation", "part-a", "fb", "kernels", "perturb", "specfun")
DECAY_KINDS = ("integral-table", "radiation", "kernels")

DEFAULT_TOLERANCES = {
    "exponent": 0.1,
    "ratio": 3.0,
    "kernel_exponent": 0.15,
    "part_a_exponent": 0.15,
    "u0_min_exponent": 4.0,
    "rate_min": 1.4,
    "evanescent_floor": 1e-12,
    "fb": 1e-12,
    "green": 1e-6,
    "fresnel": 1e-10,
    "hankel_rel": 0.02,
    "wronskian": 1e-9,
    "gen_fresnel": 1e-8,
    "perturb_amplitude": 0.1,
}

THETA_GRID = [i * math.pi / 16 for i in range(1, 16)]


def _default_r_grid(kind: str) -> list:
    if kind == "integral-table":
        return list(np.logspace(2, 6, 13))
    if kind == "radiation":
        return [10.0, 100.0, 1000.0, 10000.0]
    if kind == "kernels":
        return list(np.logspace(1, 6, 16))
    return []


@dataclass
class Campaign:
    name: str
    kind: str
    config: dict = field(default_factory=dict)
    r_grid: list = field(default_factory=list)
    theta_grid: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown campaign kind {self.kind!r}")
        if not self.r_grid:
            self.r_grid = _default_r_grid(self.kind)
        if not self.theta_grid and self.kind == "radiation":
            self.theta_grid = list(THETA_GRID)
        self.r_grid = [float(r) for r in self.r_grid]
        self.theta_grid = [float(t) for t in self.theta_grid]
        if any(b <= a for a, b in zip(self.r_grid, self.r_grid[1:])):
            raise ParameterError("r_grid must be strictly increasing")
        if self.r_grid and self.r_grid[0] <= 0:
            raise ParameterError("r_grid must be positive")
        if self.kind in DECAY_KINDS and math.log10(self.r_grid[-1] / self.r_grid[0]) < 2 - 1e-9:
            raise ParameterError("r_grid must span at least two decades")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ParameterError(f"unknown tolerance keys {sorted(unknown)}")

    def tol(self, key: str) -> float:
        return float(self.tolerances.get(key, DEFAULT_TOLERANCES[key]))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Campaign":
        keys = ("name", "kind", "config", "r_grid", "theta_grid", "tolerances", "seed", "jobs")
        return cls(**{k: d[k] for k in keys if k in d})


@dataclass
class Check:
    claim_anchor: str
    fitted: Any
    expected: float
    tolerance: float
    comparison: str  # "abs-diff" | "at-most" | "at-least"
    verdict: str  # "pass" | "fail" | "indeterminate"
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Check":
        return cls(d["claim_anchor"], d["fitted"], d["expected"], d["tolerance"], d["comparison"],
                   d["verdict"], d.get("detail", ""))


@dataclass
class Report:
    campaign: str
    kind: str
    checks: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)
    samples: list = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def exit_code(self) -> int:
        if any(c.verdict == "fail" for c in self.checks):
            return 1
        if any(c.verdict == "indeterminate" for c in self.checks):
            return 2
        return 0

    def to_dict(self) -> dict:
        return _clean({
            "campaign": self.campaign,
            "kind": self.kind,
            "checks": [c.to_dict() for c in self.checks],
            "environment": self.environment,
            "samples": self.samples,
        })

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(d["campaign"], d["kind"], [Check.from_dict(c) for c in d["checks"]],
                   d.get("environment", {}), d.get("samples", []))


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    return obj


# --------------------------------------------------------------- verdicts

def _judge(anchor, fitted, expected, tolerance, comparison, detail="") -> Check:
    value = fitted["headline"] if isinstance(fitted, dict) and "headline" in fitted else fitted
    if value is None or (isinstance(value, float) and math.isnan(value)):
        ok = False
    elif comparison == "abs-diff":
        ok = abs(value - expected) <= tolerance
    elif comparison == "at-most":
        ok = value <= tolerance
    elif comparison == "at-least":
        ok = value >= tolerance
    else:
        raise ParameterError(f"unknown comparison {comparison!r}")
    return Check(anchor, fitted, expected, tolerance, comparison, "pass" if ok else "fail", detail)


def _guarded(anchor, expected, tolerance, comparison, fn: Callable) -> Check:
    """Run fn() -> (fitted, detail); convergence trouble becomes indeterminate."""
    try:
        fitted, detail = fn()
    except ConvergenceError as exc:
        return Check(anchor, None, expected, tolerance, comparison, "indeterminate",
                     f"quadrature budget: {exc} (bound {exc.bound})")
    except InsufficientData as exc:
        return Check(anchor, None, expected, tolerance, comparison, "indeterminate", str(exc))
    return _judge(anchor, fitted, expected, tolerance, comparison, detail)


def _fit_dict(fit: decayfit.DecayFit) -> dict:
    d = fit.to_dict()
    d["headline"] = fit.headline
    return d


def _pmap(fn, items, jobs: int):
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# ===================================================== integral-table

def table_cases() -> list:
    """(claim id, family, spec template, density, scale) for the decay table."""
    end_bump = bump.one_sided(0.0, 1.0)
    wide = bump.two_sided(0.0, 0.45)
    S = oscint.IntegralSpec
    return [
        ("linear-phase/inverse-sqrt-endpoint", S("A1", 1.0), end_bump, 1.0),
        ("linear-phase/half-power-m1", S("A2", 1.0, m=1), end_bump, 1.0),
        ("linear-phase/integer-power-m0", S("A3", 1.0, m=0), end_bump, 1.0),
        ("linear-phase/integer-power-m1", S("A3", 1.0, m=1), end_bump, 1.0),
        ("quadratic-phase/sqrt-at-stationary-point", S("B1", 1.0, delta=1.0), end_bump, 1.0),
        ("quadratic-phase/shifted-square", S("B2", 1.0, a=0.3, delta=1.0), bump.two_sided(0.0, 1.0), 1.0),
        # scaled by a, the quantity whose decay is uniform in a
        ("quadratic-phase/inverse-sqrt-interior-scaled", S("C1", 1.0, a=0.05, gamma1=-0.5, gamma2=0.5), wide, 0.05),
        ("quadratic-phase/sqrt-interior", S("C2", 1.0, a=0.1, gamma1=-0.5, gamma2=0.5), wide, 1.0),
        ("quadratic-phase/abs-kink", S("D1", 1.0, a=0.1, gamma1=-0.5, gamma2=0.5), wide, 1.0),
        ("quadratic-phase/sign-jump", S("D2", 1.0, a=0.1, gamma1=-0.5, gamma2=0.5), wide, 1.0),
    ]


def _table_point(args):
    spec_d, phi_d, scale, r = args
    spec = oscint.IntegralSpec.from_dict(spec_d).with_r(r)
    phi = bump.Density.from_dict(phi_d)
    try:
        return abs(scale * oscint.eval_integral(spec, phi)), None
    except ConvergenceError as exc:
        return abs(scale * exc.best), exc.bound


def run_integral_table(c: Campaign) -> Report:
    rep = Report(c.name, c.kind)
    tol = c.tol("exponent")
    for anchor, spec, phi, scale in table_cases():
        args = [(spec.to_dict(), phi.to_dict(), scale, r) for r in c.r_grid]
        res = _pmap(_table_point, args, c.jobs)
        expected = oscint.expected_exponent(spec.cls, spec.m)
        for r, (mag, bound) in zip(c.r_grid, res):
            rep.samples.append({"check": anchor, "r": r, "magnitude": mag, "error_bound": bound})
        if any(b is not None for _, b in res):
            rep.checks.append(Check(anchor, None, expected, tol, "abs-diff", "indeterminate",
                                    "quadrature budget exhausted for some r"))
            continue
        fit = decayfit.fit_decay(list(zip(c.r_grid, [m for m, _ in res])))
        rep.checks.append(_judge(anchor, _fit_dict(fit), expected, tol, "abs-diff",
                                 f"family {spec.cls}, m={spec.m}; envelope exponent vs expected"))
    rep.environment["grid_sizes"] = {"r_points": len(c.r_grid)}
    return rep


# ========================================================== radiation

def widest_delta(k: float, cap: float = 0.45) -> float:
    """Largest window half-width keeping every singular window inside the alpha interval."""
    case, sset, lam = modes._classify_k(k)
    lo, hi = (-0.5, 0.5) if lam == "centered" else (0.0, 1.0)
    d = min(min(a - lo, hi - a) for a in sset)
    if case == "I":
        d = min(d, abs(sset[0] - sset[1]) / 2)
    return min(cap, 0.999 * d)


def regime_densities(config: modes.ProblemConfig, alpha0: float) -> list:
    """(regime label, mode j, density) for one mode of each regime present."""
    ms = modes.classify_modes(config, alpha0)
    hw = 0.98 * config.delta
    out = []
    if ms.j_minus:
        j = min(ms.j_minus, key=lambda m: (abs(alpha0 + m), m))
        out.append(("propagating", j, bump.two_sided(alpha0, hw)))
    for j in ms.j_zero:
        c = alpha0 + j
        prop = "left" if c > 0 else "right"
        evan = "right" if c > 0 else "left"
        out.append((f"cutoff-{prop}/propagating-side", j, bump.one_sided(alpha0, hw, prop)))
        out.append((f"cutoff-{evan}/evanescent-side", j, bump.one_sided(alpha0, hw, evan)))
    j = min(ms.j_plus_truncated, key=lambda m: (abs(alpha0 + m), m))
    out.append(("evanescent", j, bump.two_sided(alpha0, hw)))
    return out


def _field_and_residual(weight, j, g, cfg, a0, x1, x2):
    v = modes.synth_mode_field(weight, j, g, cfg, a0, (x1, x2))
    d = modes.radial_derivative(weight, j, g, cfg, a0, (x1, x2))
    return v, d - 1j * cfg.k * v


def _polar_sweep(args):
    """All (r, theta) samples of one (k, regime, weight) combination."""
    k, regime, j, g_d, weight, r_grid, thetas = args
    cfg = modes.ProblemConfig(k=k, delta=widest_delta(k))
    a0 = cfg.singular_set[-1]
    g = bump.Density.from_dict(g_d)
    rows = []
    for r in r_grid:
        for th in thetas:
            x1, x2 = modes.polar_point(cfg, r, th)
            if x2 < cfg.H + cfg.h:
                continue
            v, res = _field_and_residual(weight, j, g, cfg, a0, float(x1), float(x2))
            rows.append({"k": k, "regime": regime, "j": j, "weight": weight, "r": r, "theta_star": th,
                         "re": v.real, "im": v.imag, "magnitude": abs(v),
                         "scaled_field": abs(v) * r ** 0.5, "scaled_residual": abs(res) * r ** 1.5,
                         "residual": abs(res)})
    return rows


def _per_r_max(rows, key, r_grid, keep=lambda row: True):
    out = []
    for r in r_grid:
        vals = [row[key] for row in rows if row["r"] == r and keep(row)]
        if vals:
            out.append(max(vals))
    return out


# claim ids of the radiation campaign; the coverage audit checks every one appears
RADIATION_CLAIMS = (
    "sqrt/propagating/field-decay",
    "sqrt/propagating/field-rate",
    "sqrt/propagating/residual-outside-window",
    "sqrt/propagating/residual-inside-window",
    "sqrt/evanescent/steep-ray",
    "sqrt/evanescent/shallow-ray",
    "sqrt/evanescent/shallow-ray-rate",
    "sqrt/cutoff/propagating-side/field-decay",
    "sqrt/cutoff/propagating-side/residual",
    "sqrt/cutoff/propagating-side/residual-rate",
    "sqrt/cutoff/evanescent-side/high",
    "sqrt/cutoff/evanescent-side/low",
    "abs/propagating/field-decay",
    "abs/propagating/residual",
    "abs/evanescent/steep-ray",
    "abs/evanescent/shallow-ray",
    "abs/cutoff/propagating-side",
    "abs/cutoff/evanescent-side",
)


def _growth_check(anchor, values, ratio_tol, detail=""):
    g = decayfit.growth_ratio(values)
    s = decayfit.spread_ratio(values) if values else math.inf
    return _judge(anchor, g, 1.0, ratio_tol, "at-most",
                  f"{detail} spread(max/min)={s:.4g}; per-r values " + ", ".join(f"{v:.4g}" for v in values))


def _bounded_checks(c: Campaign, ks, weights):
    """Boundedness of r^{1/2}|v| and r^{3/2}|dv/dr - ikv| for every (k, regime, weight)."""
    jobs = []
    for k in ks:
        cfg = modes.ProblemConfig(k=k, delta=widest_delta(k))
        a0 = cfg.singular_set[-1]
        for regime, j, g in regime_densities(cfg, a0):
            for w in weights:
                jobs.append((k, regime, j, g.to_dict(), w, c.r_grid, c.theta_grid))
    results = _pmap(_polar_sweep, jobs, c.jobs)
    checks, samples = [], []
    ratio = c.tol("ratio")
    for (k, regime, j, _, w, _, _), rows in zip(jobs, results):
        samples.extend(rows)
        tag = f"bounded/k={k:.4g}/{regime}/j={j}/{w}"
        checks.append(_growth_check(tag + "/field", _per_r_max(rows, "scaled_field", c.r_grid), ratio,
                                    "max over theta of r^1/2|v|;"))
        checks.append(_growth_check(tag + "/residual", _per_r_max(rows, "scaled_residual", c.r_grid), ratio,
                                    "max over theta of r^3/2|dv/dr-ikv|;"))
    return checks, samples


def _claim_checks(c: Campaign) -> list:
    """Regime-specific claims for k = 1 (integer case, both cut-off modes present)."""
    ratio, floor, rate_min = c.tol("ratio"), c.tol("evanescent_floor"), c.tol("rate_min")
    k = float(c.config.get("claims_k", 1.0))
    cfg = modes.ProblemConfig(k=k, delta=widest_delta(k))
    a0 = cfg.singular_set[-1]
    reg = {name.split("/")[0] if name.startswith("cutoff") else name: (name, j, g)
           for name, j, g in regime_densities(cfg, a0)}
    prop = reg["propagating"]
    evan = reg["evanescent"]
    cut_prop = next(v for n, v in reg.items() if v[0].endswith("propagating-side"))
    cut_evan = next(v for n, v in reg.items() if v[0].endswith("evanescent-side"))
    checks = []

    def sweep(entry, weight):
        name, j, g = entry
        return _polar_sweep((k, name, j, g.to_dict(), weight, c.r_grid, c.theta_grid))

    # propagating window in the angle variable
    _, jp, _ = prop
    b1 = math.acos(min(1.0, (a0 + cfg.delta + jp) / k))
    b2 = math.acos(max(-1.0, (a0 - cfg.delta + jp) / k))

    for weight in ("sqrt", "abs"):
        rows = sweep(prop, weight)
        checks.append(_growth_check(f"{weight}/propagating/field-decay",
                                    _per_r_max(rows, "scaled_field", c.r_grid), ratio))
        if weight == "sqrt":
            inside = lambda row: b1 <= row["theta_star"] <= b2
            checks.append(_growth_check("sqrt/propagating/residual-outside-window",
                                        _per_r_max(rows, "scaled_residual", c.r_grid, lambda r_: not inside(r_)),
                                        ratio, f"window [{b1:.3f}, {b2:.3f}];"))
            checks.append(_growth_check("sqrt/propagating/residual-inside-window",
                                        _per_r_max(rows, "scaled_residual", c.r_grid, inside), ratio,
                                        f"window [{b1:.3f}, {b2:.3f}];"))
        else:
            checks.append(_growth_check("abs/propagating/residual",
                                        _per_r_max(rows, "scaled_residual", c.r_grid), ratio))

        # evanescent: steep rays (x2 - H > r/2) are exponentially small for r >= 50
        rows = sweep(evan, weight)
        steep = [max(row["magnitude"], row["residual"]) for row in rows
                 if row["r"] >= 50 and math.sin(row["theta_star"]) > 0.5]
        worst = max(steep) if steep else 0.0
        checks.append(_judge(f"{weight}/evanescent/steep-ray", worst, 0.0, floor, "at-most",
                             f"max of |v|, |dv/dr-ikv| over x2-H > r/2, r >= 50 ({len(steep)} samples)"))
        power = 1.5 if weight == "sqrt" else 2.0
        shallow = []
        for r in c.r_grid:
            vals = [max(row["magnitude"], row["residual"]) * r ** power for row in rows
                    if row["r"] == r and math.sin(row["theta_star"]) <= 0.5]
            if vals:
                shallow.append(max(vals))
        checks.append(_growth_check(f"{weight}/evanescent/shallow-ray", shallow, ratio,
                                    f"max over x2-H <= r/2 of r^{power:g} max(|v|, |res|);"))

    # evanescent residual along the lowest admissible height, x2 = H + h
    name, j, g = evan
    rs = [r for r in c.r_grid if r > cfg.h]
    vals = [abs(modes.radiation_residual("sqrt", j, g, cfg, a0, r, math.asin(cfg.h / r))) for r in rs]
    checks.append(_guarded("sqrt/evanescent/shallow-ray-rate", rate_min, rate_min, "at-least",
                           lambda: (_fit_dict(decayfit.fit_decay(list(zip(rs, vals)))),
                                    "residual exponent at x2 = H + h")))

    # cut-off modes
    for weight in ("sqrt", "abs"):
        rows = sweep(cut_prop, weight)
        if weight == "sqrt":
            checks.append(_growth_check("sqrt/cutoff/propagating-side/field-decay",
                                        _per_r_max(rows, "scaled_field", c.r_grid), ratio))
            checks.append(_growth_check("sqrt/cutoff/propagating-side/residual",
                                        _per_r_max(rows, "scaled_residual", c.r_grid), ratio))
        else:
            both = [max(a, b) for a, b in zip(_per_r_max(rows, "scaled_field", c.r_grid),
                                              _per_r_max(rows, "scaled_residual", c.r_grid))]
            checks.append(_growth_check("abs/cutoff/propagating-side", both, ratio,
                                        "max of r^1/2|v| and r^3/2|res|;"))

    # residual rate on the propagating side, along a ray whose stationary
    # point sits inside the window; the first decades are pre-asymptotic
    name, j, g = cut_prop
    rate_r = list(np.logspace(4, 6, 7))
    vals = [abs(modes.radiation_residual("sqrt", j, g, cfg, a0, r, math.pi / 16)) for r in rate_r]
    checks.append(_guarded("sqrt/cutoff/propagating-side/residual-rate", rate_min, rate_min, "at-least",
                           lambda: (_fit_dict(decayfit.fit_decay(list(zip(rate_r, vals)))),
                                    "theta* = pi/16, r in [1e4, 1e6]")))

    # evanescent side: heights above and below sqrt(r)
    name, j, g = cut_evan
    for weight in ("sqrt", "abs"):
        high, low = [], []
        for r in c.r_grid:
            pts_high = [(r * math.cos(t), cfg.H + r * math.sin(t)) for t in c.theta_grid
                        if r * math.sin(t) >= math.sqrt(r) and r * math.sin(t) >= cfg.h]
            heights = sorted({cfg.h, max(cfg.h, 0.5 * math.sqrt(r))})
            pts_low = [(s * math.sqrt(r * r - z * z), cfg.H + z) for z in heights for s in (-1, 1)
                       if z < math.sqrt(r)]
            for pts, bucket in ((pts_high, high), (pts_low, low)):
                vals = []
                for x1, x2 in pts:
                    v, res = _field_and_residual(weight, j, g, cfg, a0, x1, x2)
                    vals.append(max(abs(v), abs(res)) * r ** 1.5)
                if vals:
                    bucket.append(max(vals))
        if weight == "sqrt":
            checks.append(_growth_check("sqrt/cutoff/evanescent-side/high", high, ratio,
                                        "x2-H >= sqrt(r), r^3/2 max(|v|, |res|);"))
            checks.append(_growth_check("sqrt/cutoff/evanescent-side/low", low, ratio,
                                        "x2-H < sqrt(r), r^3/2 max(|v|, |res|);"))
        else:
            checks.append(_growth_check("abs/cutoff/evanescent-side", [max(a, b) for a, b in zip(high, low)],
                                        ratio, "all heights, r^3/2 max(|v|, |res|);"))

    # sqrt weight along theta* = pi/3 inside a wide propagating window (k = 5/2)
    cfg2 = modes.ProblemConfig(k=2.5, delta=widest_delta(2.5))
    g2 = bump.two_sided(0.5, 0.98 * cfg2.delta)
    r_rate = list(np.logspace(2, 6, 9))
    mags = [abs(modes.synth_mode_field("sqrt", 1, g2, cfg2, 0.5, modes.polar_point(cfg2, r, math.pi / 3)))
            for r in r_rate]
    tol = c.tol("exponent")
    checks.append(_guarded("sqrt/propagating/field-rate", 0.5, tol, "abs-diff",
                           lambda: (_fit_dict(decayfit.fit_decay(list(zip(r_rate, mags)))),
                                    "k = 5/2, mode 1, theta* = pi/3 inside the window")))
    return checks


def run_radiation(c: Campaign) -> Report:
    rep = Report(c.name, c.kind)
    ks = [float(k) for k in c.config.get("ks", [math.sqrt(2.0), 1.0, 0.5])]
    weights = c.config.get("weights", ["sqrt", "abs"])
    checks, samples = _bounded_checks(c, ks, weights)
    rep.checks.extend(checks)
    rep.samples.extend(samples)
    if c.config.get("claims", True):
        rep.checks.extend(_claim_checks(c))
    rep.environment["grid_sizes"] = {"r_points": len(c.r_grid), "theta_points": len(c.theta_grid)}
    return rep


# ============================================================= part-a

def cell_indices(lo: int = 4, hi: int = 256, n: int = 10) -> list:
    return sorted({int(round(v)) for v in np.geomspace(lo, hi, n)})


def part_a_norms(weight: str, mode_list, js, grid_density=24, sup=False, k=1.0, halfwidth=0.4):
    cfg = modes.ProblemConfig(k=k, delta=widest_delta(k))
    g = bump.two_sided(cfg.singular_set[-1], halfwidth)
    ev = modes.mode_sum_evaluator(weight, [(m, g) for m in mode_list], cfg, cfg.singular_set[-1])
    norm = modes.cell_sup_norm if sup else modes.cell_h1_norm
    # the bound is in |j|: take the larger of the two cells at +-j
    return [max(norm(ev, j, cfg, grid_density), norm(ev, -j, cfg, grid_density)) for j in js]


def _part_a_job(args):
    weight, mode_list, js, density, sup = args
    return part_a_norms(weight, mode_list, js, density, sup)


def run_part_a(c: Campaign) -> Report:
    rep = Report(c.name, c.kind)
    js = c.config.get("cells") or cell_indices()
    density = int(c.config.get("grid_density", 24))
    all_modes = [-2, -1, 0, 1, 2]
    # u0-type: smooth weight on the modes with no cut-off inside the window
    clean_modes = [-2, 0, 2]
    tol = c.tol("part_a_exponent")
    u0_min = c.tol("u0_min_exponent")
    plan = [
        ("cell-norm/sqrt-weight", ("sqrt", all_modes, js, density, False), 1.5, tol, "abs-diff"),
        ("cell-norm/abs-weight", ("abs", all_modes, js, density, False), 2.0, tol, "abs-diff"),
        ("cell-norm/smooth-weight", ("smooth", clean_modes, js, density, False), u0_min, u0_min, "at-least"),
        ("cell-sup/smooth-weight", ("smooth", clean_modes, js, density, True), u0_min, u0_min, "at-least"),
    ]
    results = _pmap(_part_a_job, [p[1] for p in plan], c.jobs)
    for (anchor, args, expected, t, cmp), norms in zip(plan, results):
        for j, v in zip(js, norms):
            rep.samples.append({"check": anchor, "j": j, "magnitude": v})
        xs = [1 + j for j in js]

        def fit(norms=norms, xs=xs):
            f = decayfit.fit_decay(list(zip(xs, norms)), min_decades=1.5)
            d = _fit_dict(f)
            # cell norms are sup-type already, so the plain least-squares slope is the statistic
            d["headline"] = f.exponent
            return d, f"least-squares exponent vs 1+|j|, j in [{js[0]}, {js[-1]}]"

        rep.checks.append(_guarded(anchor, expected, t, cmp, fit))
    rep.environment["grid_sizes"] = {"cells": len(js), "grid_density": density}
    return rep


# ================================================================= fb

def random_cells(rng: np.random.Generator, n_cells=5, grid=16, span=5) -> fbt.CellArray:
    idx = rng.choice(np.arange(-span, span + 1), size=n_cells, replace=False)
    return fbt.CellArray({int(j): rng.normal(size=grid) + 1j * rng.normal(size=grid) for j in idx}, grid)


def fb_errors(data: fbt.CellArray, n_alpha: int, lambda_kind: str = "centered") -> dict:
    bl = fbt.fb_transform(data, n_alpha, lambda_kind)
    back = fbt.fb_inverse(bl)
    shifted = fbt.fb_transform(data.shifted(-1), n_alpha, lambda_kind)
    return {
        "round_trip": back.max_abs_diff(data),
        "quasi_periodicity": float(np.max(np.abs(shifted.values - bl.at_cell(1)))),
        "parseval": abs(data.energy() - bl.energy()) / max(data.energy(), 1e-300),
    }


def run_fb(c: Campaign) -> Report:
    rep = Report(c.name, c.kind)
    n_seeds = int(c.config.get("seeds", 10))
    n_alpha = int(c.config.get("n_alpha", 16))
    worst = {"round_trip": 0.0, "quasi_periodicity": 0.0, "parseval": 0.0}
    for s in range(n_seeds):
        rng = np.random.default_rng(c.seed + s)
        for kind in fbt.LAMBDA_KINDS:
            errs = fb_errors(random_cells(rng), n_alpha, kind)
            for key, v in errs.items():
                worst[key] = max(worst[key], v)
                rep.samples.append({"check": f"fb/{key}", "seed": c.seed + s, "lambda_kind": kind, "magnitude": v})
    tol = c.tol("fb")
    for key, v in worst.items():
        rep.checks.append(_judge(f"fb/{key}", v, 0.0, tol, "at-most",
                                 f"max over {n_seeds} seeds and both alpha intervals"))
    rep.environment["grid_sizes"] = {"n_alpha": n_alpha, "cells": 5, "samples_per_cell": 16}
    return rep


# ============================================================ kernels

def kernel_sweeps(k: float, H: float, r_grid, theta: float = 1.0) -> dict:
    pt = lambda R: (R * math.cos(theta), H + R * math.sin(theta))
    KP = potential.KernelPoint
    return {
        "kernel/S/general": [abs(potential.kernel_S(KP(pt(R), (0.3, H), k, H))) for R in r_grid],
        "kernel/K/near-axis": [abs(potential.kernel_K(KP(pt(R), (0.5 * math.sqrt(R), H), k, H))) for R in r_grid],
        "kernel/K/general": [abs(potential.kernel_K(KP(pt(R), (-0.5 * R, H), k, H))) for R in r_grid],
    }


def gap_audit(rng: np.random.Generator, n: int, k: float, H: float, h: float) -> tuple[int, float, int]:
    """(violations, worst gap * r / 4, samples) of 0 <= gap < 4/r with |y1| < sqrt(r)."""
    bad, worst, done = 0, 0.0, 0
    while done < n:
        r = 10 ** rng.uniform(2, 6)
        t = rng.uniform(0, math.pi)
        x = (r * math.cos(t), H + r * math.sin(t))
        if x[1] - H < h:
            continue
        y1 = rng.uniform(-1, 1) * math.sqrt(r)
        g = potential.geometry_gap(potential.KernelPoint(x, (y1, H), k, H, h))
        worst = max(worst, g * r / 4)
        bad += not (0.0 <= g < 4.0 / r)
        done += 1
    return bad, worst, done


def point_source_trace(k: float, H: float, z) -> potential.LineDensity:
    c = 0.25 * math.sqrt(2 / (math.pi * k)) * 1.5
    return potential.LineDensity(
        lambda y: 0.25j * specfun.hankel1_array(0, k * np.hypot(y - z[0], H - z[1])), 0.5, c)


def green_errors(rng, k, H, h, n=20, L=1e3):
    z = (rng.uniform(-1, 1), H - rng.uniform(0.3, 1.5))
    pts = [(rng.uniform(-10, 10), H + rng.uniform(h, 10)) for _ in range(n)]
    vals = potential.uprc_eval_many(point_source_trace(k, H, z), pts, L, k, H, h)
    return [abs(v.value - potential.fundamental(x, z, k)) for v, x in zip(vals, pts)]


def layer_density(k: float = 1.0, H: float = 1.0, halfwidth: float = 0.4):
    """Trace on y2 = H of a smooth-weight propagating mode field.

    The trace is the Fourier transform of a compactly supported smooth density,
    so it decays faster than any power of |y1|.
    """
    cfg = modes.ProblemConfig(k=k, H=H, delta=widest_delta(k))
    a0 = cfg.singular_set[-1]
    g = bump.two_sided(a0, halfwidth)
    return potential.LineDensity(
        lambda y: modes.strip_mode_field("smooth", 0, g, cfg, a0, y, np.full(np.shape(y), H)), 4.0, 1.0)


def run_kernels(c: Campaign) -> Report:
    rep = Report(c.name, c.kind)
    k = float(c.config.get("k", 1.0))
    H = float(c.config.get("H", 1.0))
    h = float(c.config.get("h", 0.5))
    etol = c.tol("kernel_exponent")
    expected = {"kernel/S/general": 0.5, "kernel/K/near-axis": 1.5, "kernel/K/general": 0.5}
    for anchor, mags in kernel_sweeps(k, H, c.r_grid).items():
        for r, m in zip(c.r_grid, mags):
            rep.samples.append({"check": anchor, "r": r, "magnitude": m})
        fit = decayfit.fit_decay(list(zip(c.r_grid, mags)))
        rep.checks.append(_judge(anchor, _fit_dict(fit), expected[anchor], etol, "abs-diff"))

    rng = np.random.default_rng(c.seed)
    n_gap = int(c.config.get("gap_samples", 10000))
    bad, worst, done = gap_audit(rng, n_gap, k, H, h)
    rep.checks.append(_judge("kernel/geometry-gap-audit", bad, 0, 0, "at-most",
                             f"{done} samples, largest gap*r/4 = {worst:.4g}"))

    errs = green_errors(rng, k, H, h)
    rep.checks.append(_judge("layer/green-representation", max(errs), 0.0, c.tol("green"), "at-most",
                             "20 points with |x1| <= 10, x2-H in [h, 10], L = 1000"))

    radii = [float(r) for r in c.config.get("layer_radii", [1e2, 1e3, 1e4])]
    dens = layer_density(k, H)
    pts = [(r * math.cos(t), H + r * math.sin(t)) for r in radii for t in THETA_GRID]
    L = max(1e3, 10 * math.sqrt(max(radii)))
    u, res = potential.uprc_field_and_residual(dens, pts, L, k, H, h)
    n = len(THETA_GRID)
    fv, rv = [], []
    for i, r in enumerate(radii):
        block_u = u[i * n:(i + 1) * n]
        block_r = res[i * n:(i + 1) * n]
        fv.append(max(abs(v.value) for v in block_u) * r ** 0.5)
        rv.append(max(abs(v.value) for v in block_r) * r ** 1.5)
        for t, a, b in zip(THETA_GRID, block_u, block_r):
            rep.samples.append({"check": "layer", "r": r, "theta_star": t, "re": a.value.real, "im": a.value.imag,
                                "magnitude": abs(a.value), "scaled_residual": abs(b.value) * r ** 1.5})
    rep.checks.append(_growth_check("layer/field-bounded", fv, c.tol("ratio"), "max over theta of r^1/2|u|;"))
    rep.checks.append(_growth_check("layer/residual-bounded", rv, c.tol("ratio"),
                                    "max over theta of r^3/2|du/dr-iku|;"))
    rep.environment["grid_sizes"] = {"r_points": len(c.r_grid), "gap_samples": done, "layer_radii": len(radii)}
    return rep


# ============================================================ perturb

def perturb_audit(amplitude: float, n1: int = 61, n2: int = 31) -> dict:
    """Worst-case quantities over every preset pair."""
    out = {"identity_outside": 0.0, "boundary_map": 0.0, "min_det": math.inf, "min_eig": math.inf}
    for zname in perturb.ZETA_PRESETS:
        for pname in perturb.P_PRESETS:
            s = perturb.preset_surface(zname, pname, amplitude)
            for x1 in np.linspace(-s.L - 2, s.L + 2, n1):
                zt = s.zeta(x1)
                mapped = perturb.phi_p(s, (x1, zt))
                out["boundary_map"] = max(out["boundary_map"], abs(mapped[1] - (zt + s.p_value(x1))))
                for x2 in np.linspace(zt, s.H - 1e-9, n2):
                    A, cp = perturb.coeffs_ap_cp(s, (x1, x2))
                    if abs(x1) >= s.L or x2 >= s.H0:
                        out["identity_outside"] = max(out["identity_outside"],
                                                      float(np.max(np.abs(A - np.eye(2)))), abs(cp - 1.0))
                    out["min_det"] = min(out["min_det"], cp)
                    out["min_eig"] = min(out["min_eig"], float(np.linalg.eigvalsh(A).min()))
    return out


def run_perturb(c: Campaign) -> Report:
    rep = Report(c.name, c.kind)
    amp = c.tol("perturb_amplitude")
    try:
        a = perturb_audit(amp)
    except DegeneracyError as exc:
        rep.checks.append(Check("perturb/jacobian-positive", None, 0.0, 0.0, "at-least", "fail",
                                f"degenerate at {exc.point}"))
        return rep
    rep.checks.append(_judge("perturb/identity-outside", a["identity_outside"], 0.0, 0.0, "at-most",
                             "max |A_p - I|, |c_p - 1| for |x1| >= L or x2 >= H0"))
    rep.checks.append(_judge("perturb/jacobian-positive", a["min_det"], 0.0, 1e-300, "at-least",
                             f"min det over presets at amplitude {amp:g}"))
    rep.checks.append(_judge("perturb/coefficients-spd", a["min_eig"], 0.0, 1e-300, "at-least",
                             "min eigenvalue of A_p"))
    rep.checks.append(_judge("perturb/boundary-map", a["boundary_map"], 0.0, 0.0, "at-most",
                             "max |Phi_p(x1, zeta) - (x1, zeta + p)|"))
    small = perturb.preset_surface("flat-bumps", "bump", 1e-3)
    dev = 0.0
    for x1 in np.linspace(-small.L, small.L, 41):
        for x2 in np.linspace(small.zeta(x1), small.H0, 21):
            A, _ = perturb.coeffs_ap_cp(small, (x1, x2))
            dev = max(dev, float(np.max(np.abs(A - np.eye(2)))))
    rep.checks.append(_judge("perturb/small-amplitude-scaling", dev / 1e-3, 0.0, 10.0, "at-most",
                             "max |A_p - I| / amplitude at amplitude 1e-3"))
    return rep


# ============================================================ specfun

def fresnel_oracle(t: float) -> tuple[float, float]:
    from scipy.integrate import quad

    # one quad call per half-oscillation of z^2
    edges = np.sqrt(np.arange(0.0, t * t, math.pi / 2))
    edges = np.append(edges, t) if t > 0 else np.array([0.0])
    c = s = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        c += quad(lambda z: math.cos(z * z), a, b, epsabs=1e-15, epsrel=1e-12)[0]
        s += quad(lambda z: math.sin(z * z), a, b, epsabs=1e-15, epsrel=1e-12)[0]
    return c, s


def gen_fresnel_oracle(m: int, n: int, half_power: bool = False) -> complex:
    """Rotate the ray onto arg z = pi/(2n), where e^{i z^n} = e^{-rho^n} decays."""
    from scipy.integrate import quad

    p = m - 0.5 if half_power else float(m)
    val = quad(lambda rho: rho ** p * math.exp(-rho ** n), 0, math.inf, epsabs=1e-14, epsrel=1e-13, limit=500)[0]
    return complex(np.exp(1j * math.pi * (p + 1) / (2 * n)) * val)


GEN_FRESNEL_CASES = [(0, 2, False), (1, 2, False), (2, 3, False), (0, 2, True), (1, 2, True), (2, 2, True), (1, 4, False)]


def run_specfun(c: Campaign) -> Report:
    rep = Report(c.name, c.kind)
    ts = np.linspace(0.0, 10.0, 201)
    ferr = 0.0
    for t in ts:
        f = specfun.fresnel(float(t))
        oc, os_ = fresnel_oracle(float(t))
        ferr = max(ferr, abs(f.c - oc), abs(f.s - os_))
    rep.checks.append(_judge("specfun/fresnel-vs-quadrature", ferr, 0.0, c.tol("fresnel"), "at-most",
                             "201 points on [0, 10]"))
    worst = 0.0
    for n in (0, 1):
        full = specfun.hankel1(n, 100.0).value
        lead = complex(specfun.hankel_leading(n, 100.0))
        worst = max(worst, abs(full - lead) / abs(full))
    rep.checks.append(_judge("specfun/hankel-leading-term", worst, 0.0, c.tol("hankel_rel"), "at-most",
                             "relative gap to the leading large-argument term at t = 100, orders 0 and 1"))
    ws = np.linspace(0.5, 50.0, 400)
    h0 = specfun.hankel1_array(0, ws)
    h1 = specfun.hankel1_array(1, ws)
    wr = float(np.max(np.abs(h1.real * h0.imag - h0.real * h1.imag - 2 / (np.pi * ws))))
    rep.checks.append(_judge("specfun/wronskian", wr, 0.0, c.tol("wronskian"), "at-most",
                             "|J1 Y0 - J0 Y1 - 2/(pi t)| on [0.5, 50]"))
    gerr = 0.0
    for m, n, half in GEN_FRESNEL_CASES:
        gerr = max(gerr, abs(specfun.generalized_fresnel(m, n, half) - gen_fresnel_oracle(m, n, half)))
    rep.checks.append(_judge("specfun/generalized-fresnel-vs-contour", gerr, 0.0, c.tol("gen_fresnel"), "at-most",
                             f"{len(GEN_FRESNEL_CASES)} (power, n) pairs"))
    return rep


# ============================================================== driver

RUNNERS = {
    "integral-table": run_integral_table,
    "radiation": run_radiation,
    "part-a": run_part_a,
    "fb": run_fb,
    "kernels": run_kernels,
    "perturb": run_perturb,
    "specfun": run_specfun,
}


def run_campaign(c: Campaign, timestamp: Optional[str] = None) -> Report:
    t0 = time.time()
    rep = RUNNERS[c.kind](c)
    env = {"seed": c.seed, "timestamp": timestamp or time.strftime("%Y-%m-%dT%H:%M:%S"),
           "grid_sizes": rep.environment.get("grid_sizes", {}), "jobs": c.jobs}
    env["elapsed_s"] = round(time.time() - t0, 1)
    rep.environment = env
    return rep


def merge_reports(name: str, reports: list) -> Report:
    out = Report(name, "all")
    env = {"parts": {}}
    for r in reports:
        for ch in r.checks:
            out.checks.append(Check(f"{r.kind}:{ch.claim_anchor}", ch.fitted, ch.expected, ch.tolerance,
                                    ch.comparison, ch.verdict, ch.detail))
        for s in r.samples:
            out.samples.append({"campaign": r.kind, **s})
        env["parts"][r.kind] = r.environment
        env.setdefault("seed", r.environment.get("seed"))
        env.setdefault("timestamp", r.environment.get("timestamp"))
    out.environment = env
    return out


# ------------------------------------------------------------- output

def report_json(rep: Report, drop_timestamp: bool = False) -> str:
    d = rep.to_dict()
    if drop_timestamp:
        d["environment"].pop("timestamp", None)
        d["environment"].pop("elapsed_s", None)
        for part in d["environment"].get("parts", {}).values():
            part.pop("timestamp", None)
            part.pop("elapsed_s", None)
    return json.dumps(d, indent=2, sort_keys=True, allow_nan=False)


CSV_FIELDS = ("row_type", "claim_anchor", "verdict", "fitted", "expected", "tolerance", "comparison", "detail",
              "campaign", "check", "k", "regime", "j", "weight", "r", "theta_star", "re", "im", "magnitude",
              "scaled_field", "scaled_residual", "residual", "seed", "lambda_kind", "error_bound")


def _csv_rows(rep: Report):
    for ch in rep.checks:
        fitted = ch.fitted["headline"] if isinstance(ch.fitted, dict) and "headline" in ch.fitted else ch.fitted
        yield {"row_type": "check", "claim_anchor": ch.claim_anchor, "verdict": ch.verdict, "fitted": fitted,
               "expected": ch.expected, "tolerance": ch.tolerance, "comparison": ch.comparison,
               "detail": ch.detail, "campaign": rep.campaign}
    for s in rep.samples:
        row = {"row_type": "sample"}
        row.update({k: v for k, v in _clean(s).items() if k in CSV_FIELDS})
        yield row


def emit_report(rep: Report, fmt: str, path) -> None:
    if fmt not in ("json", "csv"):
        raise ParameterError(f"unknown report format {fmt!r}")
    try:
        with open(path, "w", newline="") as fh:
            if fmt == "json":
                fh.write(report_json(rep))
                fh.write("\n")
            else:
                w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
                w.writeheader()
                for row in _csv_rows(rep):
                    w.writerow(row)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def load_report(path) -> Report:
    with open(path) as fh:
        return Report.from_dict(json.load(fh))
