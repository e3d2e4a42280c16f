"""Locally perturbed periodic surfaces and the map that flattens the perturbation.

The surface x2 = zeta(x1) (2 pi periodic) is replaced by zeta + p on [-L, L].
The map

    Phi_p(x) = (x1, x2 + (x2 - H0)^3 / (zeta(x1) - H0)^3 * p(x1))   for x2 < H0

(identity above H0) carries the periodic domain onto the perturbed one.  The
coefficients of the pulled-back Helmholtz operator are

    A_p = |det J| J^{-1} J^{-T},    c_p = |det J|,    J = grad Phi_p.

Only J[1, 0] and J[1, 1] differ from the identity, so everything is explicit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .bump import _profile
from .errors import DegeneracyError, DomainError, ParameterError

FD_STEP = 1e-7


def _fd(f: Callable, x: float, step: float = FD_STEP) -> float:
    return (f(x + step) - f(x - step)) / (2 * step)


@dataclass
class SurfaceModel:
    zeta: Callable
    p: Callable
    L: float
    H0: float
    H: float
    zeta_prime: Optional[Callable] = None
    p_prime: Optional[Callable] = None
    name: str = "custom"
    check_points: int = 2001

    def __post_init__(self):
        if not self.L > 0:
            raise ParameterError("L must be > 0")
        if not self.H0 < self.H:
            raise ParameterError("need H0 < H")
        xs = np.linspace(-max(self.L, math.pi), max(self.L, math.pi), self.check_points)
        z = np.array([self.zeta(x) for x in xs])
        zp = np.array([self.zeta(x + 2 * math.pi) for x in xs])
        if np.max(np.abs(z - zp)) > 1e-12:
            raise ParameterError("zeta is not 2 pi periodic on the sample grid")
        if not np.min(z) > 0:
            raise ParameterError("need inf zeta > 0")
        pert = np.array([self.p_value(x) for x in xs])
        if not np.max(z) < self.H0 or not np.max(z + pert) < self.H0:
            raise ParameterError("need sup zeta and sup(zeta + p) below H0")

    # p vanishes identically outside [-L, L], whatever the callable returns there
    def p_value(self, x1: float) -> float:
        return 0.0 if abs(x1) >= self.L else float(self.p(x1))

    def dzeta(self, x1: float) -> float:
        return float(self.zeta_prime(x1)) if self.zeta_prime else _fd(self.zeta, x1)

    def dp(self, x1: float) -> float:
        if abs(x1) >= self.L:
            return 0.0
        return float(self.p_prime(x1)) if self.p_prime else _fd(self.p_value, x1)

    def to_dict(self) -> dict:
        return {"name": self.name, "L": self.L, "H0": self.H0, "H": self.H}


# ------------------------------------------------------------------- presets

def _periodic_bump(x: float, halfwidth: float) -> float:
    u = (math.remainder(x, 2 * math.pi)) / halfwidth
    return float(_profile(np.array([u]), 0)[0])


def _periodic_bump_d(x: float, halfwidth: float) -> float:
    u = (math.remainder(x, 2 * math.pi)) / halfwidth
    return float(_profile(np.array([u]), 1)[0]) / halfwidth


def _bump(x: float, center: float, halfwidth: float, order: int = 0) -> float:
    u = (x - center) / halfwidth
    return float(_profile(np.array([u]), order)[0]) / halfwidth ** order


ZETA_PRESETS = {
    # flat floor with one smooth bump per period
    "flat-bumps": (lambda x: 0.4 + 0.3 * _periodic_bump(x, 1.5),
                   lambda x: 0.3 * _periodic_bump_d(x, 1.5)),
    "sinusoid": (lambda x: 0.6 + 0.2 * math.sin(x), lambda x: 0.2 * math.cos(x)),
    "two-tone": (lambda x: 0.6 + 0.15 * math.sin(x) + 0.05 * math.cos(2 * x),
                 lambda x: 0.15 * math.cos(x) - 0.1 * math.sin(2 * x)),
}


def _p_preset(name: str, amplitude: float, L: float):
    if name == "bump":
        return (lambda x: amplitude * _bump(x, 0.0, L),
                lambda x: amplitude * _bump(x, 0.0, L, 1))
    if name == "dent":
        return (lambda x: -amplitude * _bump(x, 0.0, L),
                lambda x: -amplitude * _bump(x, 0.0, L, 1))
    if name == "double":
        c, w = 0.5 * L, 0.5 * L
        return (lambda x: amplitude * (_bump(x, -c, w) - _bump(x, c, w)),
                lambda x: amplitude * (_bump(x, -c, w, 1) - _bump(x, c, w, 1)))
    raise ParameterError(f"unknown perturbation preset {name!r}")


P_PRESETS = ("bump", "dent", "double")


def preset_surface(zeta: str = "flat-bumps", pert: str = "bump", amplitude: float = 0.1,
                   L: float = 3.0, H0: float = 1.5, H: float = 2.0) -> SurfaceModel:
    if zeta not in ZETA_PRESETS:
        raise ParameterError(f"unknown surface preset {zeta!r}")
    zf, zd = ZETA_PRESETS[zeta]
    pf, pd = _p_preset(pert, amplitude, L)
    return SurfaceModel(zf, pf, L, H0, H, zd, pd, name=f"{zeta}/{pert}/{amplitude:g}")


def surface_from_tables(zeta_x, zeta_vals, p_x, p_vals, L: float, H0: float, H: float) -> SurfaceModel:
    """Cubic interpolation of sampled profiles.

    ``zeta_x`` must cover exactly one period (last abscissa = first + 2 pi, equal
    values there); p samples must cover [-L, L].  Derivatives then come from
    finite differences.
    """
    from scipy.interpolate import CubicSpline

    zx = np.asarray(zeta_x, dtype=float)
    zv = np.asarray(zeta_vals, dtype=float)
    if abs(zx[-1] - zx[0] - 2 * math.pi) > 1e-9:
        raise ParameterError("zeta table must span exactly one period")
    zv = zv.copy()
    zv[-1] = zv[0]
    zs = CubicSpline(zx, zv, bc_type="periodic")
    x0 = zx[0]

    def zeta(x):
        return float(zs(x0 + (x - x0) % (2 * math.pi)))

    px = np.asarray(p_x, dtype=float)
    if px[0] > -L + 1e-12 or px[-1] < L - 1e-12:
        raise ParameterError("perturbation table must cover [-L, L]")
    ps = CubicSpline(px, np.asarray(p_vals, dtype=float))
    return SurfaceModel(zeta, lambda x: float(ps(x)), L, H0, H, name="table")


def surface_from_csv(path, L: float, H0: float, H: float) -> SurfaceModel:
    """CSV columns x1, zeta, p.  zeta is read from the first full period of rows."""
    try:
        data = np.genfromtxt(path, delimiter=",", dtype=float)
    except OSError as exc:
        raise OSError(f"cannot read surface table {path}: {exc}") from exc
    data = data[~np.isnan(data).any(axis=1)]
    x = data[:, 0]
    per = x <= x[0] + 2 * math.pi + 1e-9
    return surface_from_tables(x[per], data[per, 1], x, data[:, 2], L, H0, H)


# ------------------------------------------------------------------ the map

def _blend(s: SurfaceModel, x1: float, x2: float) -> float:
    return (x2 - s.H0) ** 3 / (s.zeta(x1) - s.H0) ** 3


def _check_above(s: SurfaceModel, x) -> tuple[float, float]:
    x1, x2 = float(x[0]), float(x[1])
    if x2 < s.zeta(x1) - 1e-14:
        raise DomainError(f"point {x} lies below the surface")
    return x1, x2


def phi_p(s: SurfaceModel, x) -> tuple[float, float]:
    x1, x2 = _check_above(s, x)
    if x2 >= s.H0:
        return (x1, x2)
    pv = s.p_value(x1)
    if pv == 0.0:
        return (x1, x2)
    return (x1, x2 + _blend(s, x1, x2) * pv)


def jacobian(s: SurfaceModel, x) -> np.ndarray:
    x1, x2 = _check_above(s, x)
    J = np.eye(2)
    if x2 >= s.H0 or abs(x1) >= s.L:
        return J
    zm = s.zeta(x1) - s.H0
    dz = x2 - s.H0
    pv = s.p_value(x1)
    J[1, 0] = -3 * dz ** 3 * s.dzeta(x1) / zm ** 4 * pv + dz ** 3 / zm ** 3 * s.dp(x1)
    J[1, 1] = 1 + 3 * dz ** 2 / zm ** 3 * pv
    return J


def coeffs_ap_cp(s: SurfaceModel, x) -> tuple[np.ndarray, float]:
    x1, x2 = _check_above(s, x)
    if x2 >= s.H:
        raise ParameterError("coefficients are only defined in the strip x2 < H")
    if x2 >= s.H0 or abs(x1) >= s.L:
        return np.eye(2), 1.0
    J = jacobian(s, (x1, x2))
    det = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
    if det <= 0:
        raise DegeneracyError(f"grad Phi_p is singular at {(x1, x2)} (det = {det:.3g})", (x1, x2))
    Jinv = np.linalg.inv(J)
    return abs(det) * Jinv @ Jinv.T, abs(det)


def amplitude_threshold(zeta: str = "flat-bumps", pert: str = "bump", L: float = 3.0,
                        H0: float = 1.5, n: int = 4001) -> float:
    """Largest amplitude keeping det grad Phi_p > 0 and zeta + p < H0.

    det is smallest on the surface, where it equals 1 - 3 p / (H0 - zeta).
    """
    zf, _ = ZETA_PRESETS[zeta]
    shape, _ = _p_preset(pert, 1.0, L)
    xs = np.linspace(-L, L, n)
    best = math.inf
    for x in xs:
        q = shape(x)
        if q > 0:
            gap = H0 - zf(x)
            best = min(best, gap / (3 * q), gap / q)
    return best


def injectivity_audit(s: SurfaceModel, n1: int = 121, n2: int = 121) -> float:
    """Smallest mapped spacing along each vertical grid line of the strip.

    Phi_p keeps x1 fixed, so the map is injective on the grid iff every column
    stays strictly increasing in x2.  Returns the minimum gap (negative or tiny
    means a fold).
    """
    gap = math.inf
    for x1 in np.linspace(-s.L, s.L, n1):
        lo = s.zeta(x1)
        col = [phi_p(s, (x1, x2))[1] for x2 in np.linspace(lo, s.H, n2)]
        gap = min(gap, float(np.min(np.diff(col))))
    return gap
