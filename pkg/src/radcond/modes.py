"""Quasi-periodic field synthesis above a periodic surface.

Mode j of a Bloch family contributes e^{i(alpha+j)x1 + i sqrt(k^2-(alpha+j)^2)(x2-H)}.
For |alpha + j| > k the vertical factor is taken as the decaying branch
i sqrt(k^2 - xi^2) := -sqrt(xi^2 - k^2).

The mode fields integrate one such term against a weight w(alpha - alpha0)
times a density g over a window around a singular point alpha0.  Both halves
of the window are mapped by alpha = alpha0 +/- s^2, which makes the sqrt
weight and the square-root branch point of cut-off modes (|alpha0+j| = k)
smooth in s.  Panels in s are sized so the complex exponent changes by at most
pi/4 per panel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .oscint import gauss_legendre

CASES = ("I", "II-integer", "II-half")
WEIGHTS = ("smooth", "sqrt", "abs", "sign")
J0_TOL = 1e-12


# ------------------------------------------------------------ configuration

def _classify_k(k: float):
    two_k = 2.0 * k
    n = round(two_k)
    if abs(two_k - n) < 1e-12 and n > 0:
        if n % 2 == 0:
            return "II-integer", (0.0,), "centered"
        return "II-half", (0.5,), "shifted"
    kappa = k - round(k)
    return "I", (-kappa, kappa), "centered"


@dataclass(frozen=True)
class ProblemConfig:
    k: float
    H: float = 1.0
    h: float = 0.5
    case: str = ""
    singular_set: tuple = ()
    lambda_kind: str = ""
    delta: float = 0.05
    delta0: float = 0.05
    j_max: int = 0

    def __post_init__(self):
        if not self.k > 0:
            raise ParameterError("k must be > 0")
        if not self.h > 0:
            raise ParameterError("h must be > 0")
        case, sset, lam = _classify_k(self.k)
        if not self.case:
            object.__setattr__(self, "case", case)
        if not self.singular_set:
            object.__setattr__(self, "singular_set", sset)
        if not self.lambda_kind:
            object.__setattr__(self, "lambda_kind", lam)
        if self.j_max == 0:
            object.__setattr__(self, "j_max", int(math.ceil(self.k)) + 4)
        object.__setattr__(self, "singular_set", tuple(float(a) for a in self.singular_set))
        if self.case != case or not np.allclose(sorted(self.singular_set), sorted(sset), atol=1e-12, rtol=0):
            raise ParameterError(f"k={self.k} implies case {case} with singular set {sset}")
        if self.lambda_kind != lam:
            raise ParameterError(f"case {case} uses the {lam} alpha interval")
        lo, hi = (-0.5, 0.5) if lam == "centered" else (0.0, 1.0)
        for a0 in self.singular_set:
            if a0 - self.delta < lo - 1e-15 or a0 + self.delta > hi + 1e-15:
                raise ParameterError(f"window around {a0} with delta={self.delta} leaves the alpha interval")
        if not 0 < self.delta0 < math.pi / 2:
            raise ParameterError("delta0 must lie in (0, pi/2)")
        if self.j_max < min_truncation(self.k):
            raise ParameterError(f"j_max must be at least {min_truncation(self.k)}")

    @classmethod
    def from_k(cls, k: float, **kw) -> "ProblemConfig":
        return cls(k=k, **kw)

    @property
    def kappa(self) -> float:
        return self.k - round(self.k)

    def to_dict(self) -> dict:
        return {
            "k": self.k, "H": self.H, "h": self.h, "case": self.case,
            "singular_set": list(self.singular_set), "lambda_kind": self.lambda_kind,
            "delta": self.delta, "delta0": self.delta0, "j_max": self.j_max,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ProblemConfig":
        d = dict(d)
        if "singular_set" in d:
            d["singular_set"] = tuple(d["singular_set"])
        return cls(**d)


@dataclass(frozen=True)
class ModeSet:
    j_minus: tuple
    j_zero: tuple
    j_plus_truncated: tuple
    j_max: int
    alpha0: float

    def regime(self, j: int) -> str:
        if j in self.j_minus:
            return "propagating"
        if j in self.j_zero:
            return "cutoff"
        if j in self.j_plus_truncated:
            return "evanescent"
        raise ParameterError(f"mode {j} outside |j| <= {self.j_max}")


def min_truncation(k: float) -> int:
    """Smallest j_max keeping every propagating and cut-off mode plus one evanescent one per side."""
    return int(math.ceil(k + 0.5)) + 1


def _match_singular(config: ProblemConfig, alpha0: float) -> float:
    for a in config.singular_set:
        if abs(a - alpha0) <= 1e-12:
            return a
    raise ParameterError(f"alpha0={alpha0} is not in the singular set {config.singular_set}")


def classify_modes(config: ProblemConfig, alpha0: float, j_max: int | None = None) -> ModeSet:
    alpha0 = _match_singular(config, alpha0)
    j_max = config.j_max if j_max is None else int(j_max)
    if j_max < min_truncation(config.k):
        raise ParameterError(f"j_max must be at least {min_truncation(config.k)}")
    minus, zero, plus = [], [], []
    for j in range(-j_max, j_max + 1):
        d = abs(alpha0 + j)
        if abs(d - config.k) <= J0_TOL:
            zero.append(j)
        elif d < config.k:
            minus.append(j)
        else:
            plus.append(j)
    return ModeSet(tuple(minus), tuple(zero), tuple(plus), j_max, alpha0)


@dataclass(frozen=True)
class PropagatingGeometry:
    theta0: float
    beta1: float
    beta2: float
    theta_star: float
    r: float


def propagating_geometry(config: ProblemConfig, alpha0: float, j: int, theta_star: float, r: float):
    """Angular picture of a propagating mode: alpha + j = k cos(theta)."""
    modes = classify_modes(config, alpha0)
    if j not in modes.j_minus:
        raise ParameterError(f"mode {j} is not propagating at alpha0={alpha0}")
    k, d = config.k, config.delta
    c0, c1, c2 = (alpha0 + j) / k, (alpha0 + d + j) / k, (alpha0 - d + j) / k
    if not (-1 < c1 < 1 and -1 < c2 < 1):
        raise ParameterError("window reaches the cut-off; reduce delta")
    geo = PropagatingGeometry(math.acos(c0), math.acos(c1), math.acos(c2), float(theta_star), float(r))
    if not (0 < config.delta0 < geo.beta1 < geo.beta2 < math.pi - config.delta0):
        raise ParameterError("angular window violates the delta0 margin")
    if not 0 < theta_star < math.pi:
        raise ParameterError("theta_star must lie in (0, pi)")
    return geo


# ------------------------------------------------------------- Rayleigh sums

def vertical_factor(xi, k: float) -> np.ndarray:
    """i sqrt(k^2 - xi^2) with the decaying branch for |xi| > k."""
    xi = np.asarray(xi, dtype=float)
    q = k * k - xi * xi
    return np.where(q >= 0, 1j * np.sqrt(np.abs(q)), -np.sqrt(np.abs(q)))


@dataclass
class RayleighField:
    alpha: float
    coefficients: dict = field(default_factory=dict)
    k: float = 1.0
    H: float = 0.0


def rayleigh_eval(fld: RayleighField, x1, x2):
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if np.any(x2 < fld.H):
        raise ParameterError("Rayleigh expansion needs x2 >= H")
    out = np.zeros(np.broadcast(x1, x2).shape, dtype=complex)
    for j, c in fld.coefficients.items():
        xi = fld.alpha + j
        out = out + c * np.exp(1j * xi * x1 + vertical_factor(xi, fld.k) * (x2 - fld.H))
    return out if out.ndim else complex(out)


# --------------------------------------------------------------- mode fields

def _k2_minus_xi2(k: float, center: float, sigma: float, s2: np.ndarray) -> np.ndarray:
    """k^2 - (center + sigma s^2)^2 without cancellation at a cut-off center."""
    if abs(center - k) <= J0_TOL:
        return -sigma * s2 * (2 * k + sigma * s2)
    if abs(center + k) <= J0_TOL:
        return sigma * s2 * (2 * k - sigma * s2)
    xi = center + sigma * s2
    return (k - xi) * (k + xi)


def _weight(weight: str, sigma: float, s: np.ndarray):
    # w(alpha - alpha0) with alpha - alpha0 = sigma s^2, principal sqrt
    if weight == "smooth":
        return 1.0
    if weight == "sqrt":
        return s if sigma > 0 else 1j * s
    if weight == "abs":
        return s * s
    if weight == "sign":
        return sigma
    raise ParameterError(f"unknown weight {weight!r}")


def _s_ranges(g, alpha0: float, delta: float):
    lo, hi = g.support()
    out = []
    if hi > alpha0:
        out.append((+1.0, math.sqrt(max(lo - alpha0, 0.0)), math.sqrt(min(hi - alpha0, delta))))
    if lo < alpha0:
        out.append((-1.0, math.sqrt(max(alpha0 - hi, 0.0)), math.sqrt(min(alpha0 - lo, delta))))
    return [(sg, a, b) for sg, a, b in out if b > a]


def _panels(k, center, sigma, s_lo, s_hi, x1, dz, base=48, pre=2048, cut=-80.0):
    """Panel edges in s: exponent change <= pi/4 per panel, negligible tail dropped."""
    s = np.linspace(s_lo, s_hi, pre + 1)
    sm = 0.5 * (s[:-1] + s[1:])
    q = _k2_minus_xi2(k, center, sigma, sm * sm)
    xi = center + sigma * sm * sm
    ax1 = float(np.max(np.abs(x1))) if x1.size else 0.0
    adz = float(np.max(np.abs(dz))) if dz.size else 0.0
    rate = 2 * sm * (ax1 + adz * np.abs(xi) / np.sqrt(np.abs(q)))
    # drop the region where every point is buried under the evanescent decay
    dz_min = float(np.min(dz)) if dz.size else 0.0
    decay = np.where(q < 0, -np.sqrt(np.abs(q)), 0.0) * max(dz_min, 0.0)
    live = np.nonzero(decay > cut)[0]
    if live.size == 0:
        return None
    i0, i1 = live[0], live[-1] + 1
    s_lo, s_hi = s[i0], s[i1]
    cum = np.concatenate([[0.0], np.cumsum(rate[i0:i1] * np.diff(s[i0:i1 + 1]))])
    n_phase = int(math.ceil(cum[-1] / (math.pi / 4)))
    edges = [np.linspace(s_lo, s_hi, base + 1)]
    if n_phase > 0:
        edges.append(np.interp(np.linspace(0, cum[-1], n_phase + 1), cum, s[i0:i1 + 1]))
    return np.unique(np.concatenate(edges))


def _mode_integral(weight, j, g, config, alpha0, x1, x2, multiplier=None, n_gauss=10, max_matrix=4_000_000):
    """Core quadrature; ``multiplier(xi, ivert)`` optionally scales the integrand."""
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    x1, x2 = np.broadcast_arrays(x1, x2)
    shape = x1.shape
    x1, x2 = x1.ravel(), x2.ravel()
    out = np.zeros(x1.size, dtype=complex)
    if getattr(g, "is_zero", False):
        return out.reshape(shape)
    k, H = config.k, config.H
    center = alpha0 + j
    dz = x2 - H
    nodes, wts = gauss_legendre(n_gauss)
    for sigma, s_lo, s_hi in _s_ranges(g, alpha0, config.delta):
        edges = _panels(k, center, sigma, s_lo, s_hi, x1, dz)
        if edges is None:
            continue
        a, b = edges[:-1, None], edges[1:, None]
        half = 0.5 * (b - a)
        s = (0.5 * (a + b) + half * nodes[None, :]).ravel()
        w = (half * wts[None, :]).ravel()
        s2 = s * s
        q = _k2_minus_xi2(k, center, sigma, s2)
        iv = np.where(q >= 0, 1j * np.sqrt(np.abs(q)), -np.sqrt(np.abs(q)))
        xi = center + sigma * s2
        amp = w * 2 * s * _weight(weight, sigma, s) * g(alpha0 + sigma * s2)
        if multiplier is not None:
            amp = amp * multiplier(xi, iv)
        step = max(1, max_matrix // max(1, s.size))
        for p0 in range(0, x1.size, step):
            sl = slice(p0, p0 + step)
            ex = np.exp(1j * np.outer(xi, x1[sl]) + np.outer(iv, dz[sl]))
            out[sl] += amp @ ex
    return out.reshape(shape)


def _check_mode(config, alpha0, j, g):
    modes = classify_modes(config, alpha0)
    if not (-modes.j_max <= j <= modes.j_max):
        raise ParameterError(f"mode {j} is outside the configured truncation |j| <= {modes.j_max}")
    if not getattr(g, "is_zero", False):
        lo, hi = g.support()
        if lo < alpha0 - config.delta - 1e-15 or hi > alpha0 + config.delta + 1e-15:
            raise ParameterError("density must be supported inside the window around alpha0")
    return modes


def _check_standoff(config, x2):
    if np.any(np.asarray(x2) < config.H + config.h - 1e-12):
        raise ParameterError("evaluation point must satisfy x2 >= H + h")


def _scalar(v, x1, x2):
    return complex(v.ravel()[0]) if np.ndim(x1) == 0 and np.ndim(x2) == 0 else v


def synth_mode_field(weight, j, g, config, alpha0, x):
    """int w(alpha-alpha0) g(alpha) e^{i(alpha+j)x1 + i sqrt(k^2-(alpha+j)^2)(x2-H)} dalpha."""
    alpha0 = _match_singular(config, alpha0)
    _check_mode(config, alpha0, j, g)
    x1, x2 = x
    _check_standoff(config, x2)
    return _scalar(_mode_integral(weight, j, g, config, alpha0, x1, x2), x1, x2)


def strip_mode_field(weight, j, g, config, alpha0, x1, x2):
    """Same integral without the standoff check, for sampling the strip below H + h."""
    alpha0 = _match_singular(config, alpha0)
    _check_mode(config, alpha0, j, g)
    return _mode_integral(weight, j, g, config, alpha0, x1, x2)


def _polar_multiplier(x1, x2, H):
    rr = np.hypot(x1, x2 - H)
    c, s = x1 / rr, (x2 - H) / rr
    return c, s


def radial_derivative(weight, j, g, config, alpha0, x):
    """d/dr of the mode field along the ray from (0, H), by differentiating under the integral."""
    alpha0 = _match_singular(config, alpha0)
    _check_mode(config, alpha0, j, g)
    x1, x2 = x
    _check_standoff(config, x2)
    x1a = np.atleast_1d(np.asarray(x1, dtype=float))
    x2a = np.atleast_1d(np.asarray(x2, dtype=float))
    x1a, x2a = np.broadcast_arrays(x1a, x2a)
    c, s = _polar_multiplier(x1a, x2a, config.H)
    if np.allclose(c, c.flat[0]) and np.allclose(s, s.flat[0]):
        c0, s0 = float(c.flat[0]), float(s.flat[0])
        v = _mode_integral(weight, j, g, config, alpha0, x1a, x2a,
                           multiplier=lambda xi, iv: 1j * xi * c0 + iv * s0)
    else:
        v = np.array([
            _mode_integral(weight, j, g, config, alpha0, p1, p2,
                           multiplier=lambda xi, iv, cc=cc, ss=ss: 1j * xi * cc + iv * ss)[0]
            for p1, p2, cc, ss in zip(x1a.ravel(), x2a.ravel(), c.ravel(), s.ravel())
        ]).reshape(x1a.shape)
    return _scalar(v, x1, x2)


def polar_point(config: ProblemConfig, r, theta_star):
    r = np.asarray(r, dtype=float)
    return r * np.cos(theta_star), config.H + r * np.sin(theta_star)


def radiation_residual(weight, j, g, config, alpha0, r, theta_star):
    """dv/dr - i k v at (r cos theta*, H + r sin theta*)."""
    x = polar_point(config, r, theta_star)
    return radial_derivative(weight, j, g, config, alpha0, x) - 1j * config.k * synth_mode_field(
        weight, j, g, config, alpha0, x
    )


# ----------------------------------------------------------------- cell norms

def _cell_grid(j, config, grid_density, h_floor):
    if grid_density < 4:
        raise ParameterError("grid_density must be >= 4")
    top = config.H + config.h
    if not h_floor < top:
        raise ParameterError("floor must lie below H + h")
    d1 = 2 * np.pi / grid_density
    n2 = max(4, int(math.ceil((top - h_floor) / d1)))
    d2 = (top - h_floor) / n2
    x1 = 2 * np.pi * j - np.pi + d1 * np.arange(-1, grid_density + 2)
    x2 = h_floor + d2 * np.arange(-1, n2 + 2)
    return x1, x2, d1, d2


def _trapezoid_weights(n, d):
    w = np.full(n, d)
    w[0] = w[-1] = 0.5 * d
    return w


def cell_h1_norm(evaluator, j, config, grid_density=32, h_floor=None) -> float:
    """Discrete H^1 norm of a field on the cell [2 pi j - pi, 2 pi j + pi] x [floor, H + h].

    ``evaluator(x1, x2)`` takes broadcastable arrays.  One ghost layer is sampled
    so the central differences reach the cell boundary.
    """
    h_floor = config.H - 0.5 if h_floor is None else h_floor
    x1, x2, d1, d2 = _cell_grid(j, config, grid_density, h_floor)
    X1, X2 = np.meshgrid(x1, x2, indexing="ij")
    u = np.asarray(evaluator(X1, X2), dtype=complex)
    core = u[1:-1, 1:-1]
    g1 = (u[2:, 1:-1] - u[:-2, 1:-1]) / (2 * d1)
    g2 = (u[1:-1, 2:] - u[1:-1, :-2]) / (2 * d2)
    dens = np.abs(core) ** 2 + np.abs(g1) ** 2 + np.abs(g2) ** 2
    w = np.outer(_trapezoid_weights(core.shape[0], d1), _trapezoid_weights(core.shape[1], d2))
    return float(np.sqrt(np.sum(w * dens)))


def cell_sup_norm(evaluator, j, config, grid_density=32, h_floor=None) -> float:
    h_floor = config.H - 0.5 if h_floor is None else h_floor
    x1, x2, _, _ = _cell_grid(j, config, grid_density, h_floor)
    X1, X2 = np.meshgrid(x1[1:-1], x2[1:-1], indexing="ij")
    return float(np.max(np.abs(evaluator(X1, X2))))


def mode_sum_evaluator(weight, terms, config, alpha0):
    """Evaluator for sum over (j, g) pairs of the strip mode fields."""
    def ev(x1, x2):
        total = 0j
        for j, g in terms:
            total = total + strip_mode_field(weight, j, g, config, alpha0, x1, x2)
        return total
    return ev


def helmholtz_residual(evaluator, x1, x2, k, step):
    """5-point Laplacian plus k^2 u at (x1, x2)."""
    c = evaluator(x1, x2)
    lap = (evaluator(x1 + step, x2) + evaluator(x1 - step, x2) + evaluator(x1, x2 + step)
           + evaluator(x1, x2 - step) - 4 * c) / step ** 2
    return lap + k * k * c
