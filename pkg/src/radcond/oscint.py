"""The oscillatory integral families with linear or quadratic phase.

    A1  int_0^delta  x^{-1/2} phi e^{irx}          A2  x^{m-1/2}       A3  x^m
    B1  int_0^delta  sqrt(x) phi e^{irx^2}
    B2  int_{-a}^delta (x+a)^2 phi e^{irx^2}
    C1  int_{g1}^{g2} (x-a)^{-1/2} phi e^{irx^2}   C2  (x-a)^{1/2}
    D1  int_{g1}^{g2} |x-a| phi e^{irx^2}          D2  sgn(x-a)

Half-integer powers of (x - a) use the principal branch, so for x < a
``sqrt(x - a) = i sqrt(a - x)``.

``eval_integral`` is the production route: composite Gauss-Legendre panels
whose length keeps the phase change below a quarter period, with the
substitution x = a +/- s^2 on every panel next to a half-integer power so the
integrand in s is smooth.  ``oracle_integral`` is a deliberately naive
independent check (adaptive Simpson with Richardson extrapolation and a graded
mesh toward singular points) and shares no code with the production route.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, asdict

import numpy as np

from .errors import ConvergenceError, ParameterError

CLASSES = ("A1", "A2", "A3", "B1", "B2", "C1", "C2", "D1", "D2")
LINEAR_PHASE = ("A1", "A2", "A3")

# expected decay exponent of |I(r)| for each family (m is the power parameter)
def expected_exponent(cls: str, m: int = 0) -> float:
    return {
        "A1": 0.5,
        "A2": 0.5 + m,
        "A3": 1.0 + m,
        "B1": 0.75,
        "B2": 0.5,
        "C1": 0.5,
        "C2": 0.5,
        "D1": 0.5,
        "D2": 0.5,
    }[cls]


@dataclass(frozen=True)
class IntegralSpec:
    cls: str
    r: float
    a: float = 0.0
    delta: float = 1.0
    gamma1: float = -1.0
    gamma2: float = 1.0
    m: int = 0

    def __post_init__(self):
        validate_spec(self)

    def with_r(self, r: float) -> "IntegralSpec":
        return IntegralSpec(self.cls, r, self.a, self.delta, self.gamma1, self.gamma2, self.m)

    def interval(self) -> tuple[float, float]:
        if self.cls in ("A1", "A2", "A3", "B1"):
            return (0.0, self.delta)
        if self.cls == "B2":
            return (-self.a, self.delta)
        return (self.gamma1, self.gamma2)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["class"] = d.pop("cls")
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "IntegralSpec":
        data = dict(data)
        kind = data.pop("class", None) or data.pop("cls")
        return cls(kind, **{k: data[k] for k in ("r", "a", "delta", "gamma1", "gamma2", "m") if k in data})


def validate_spec(spec: IntegralSpec) -> None:
    if spec.cls not in CLASSES:
        raise ParameterError(f"unknown integral class {spec.cls!r}")
    if not (math.isfinite(spec.r) and spec.r > 0):
        raise ParameterError("r must be finite and > 0")
    if int(spec.m) != spec.m or spec.m < 0:
        raise ParameterError("m must be a non-negative integer")
    if spec.cls in ("A1", "A2", "A3", "B1") and not spec.delta > 0:
        raise ParameterError("delta must be > 0")
    if spec.cls == "B2":
        if not spec.a > 0:
            raise ParameterError("B2 needs a > 0")
        if not spec.delta > -spec.a:
            raise ParameterError("B2 needs delta > -a")
    if spec.cls[0] in "CD" and not spec.gamma1 < spec.gamma2:
        raise ParameterError("need gamma1 < gamma2")


def _vanishing_endpoints(spec: IntegralSpec) -> tuple[float, ...]:
    lo, hi = spec.interval()
    if spec.cls[0] in "CD":
        return (lo, hi)
    return (hi,)


def check_density(spec: IntegralSpec, phi) -> None:
    """Reject densities that do not vanish (to order 4) where the family needs it."""
    if getattr(phi, "is_zero", False):
        return
    for x in _vanishing_endpoints(spec):
        for order in range(5):
            if np.any(np.asarray(phi(np.array([x]), order)) != 0):
                raise ParameterError(
                    f"{spec.cls}: density does not vanish at endpoint x={x} (derivative order {order})"
                )


# ------------------------------------------------------------ kernel model

def _half_power(cls: str, m: int):
    """Exponent q if the kernel is (x - a)^q with q half-integer, else None."""
    return {"A1": -0.5, "A2": m - 0.5, "B1": 0.5, "C1": -0.5, "C2": 0.5}.get(cls)


def _singular_point(spec: IntegralSpec):
    if spec.cls in ("A1", "A2", "B1"):
        return 0.0
    if spec.cls[0] in "CD":
        return spec.a
    return None


def _plain_kernel(spec: IntegralSpec, x: np.ndarray) -> np.ndarray:
    c, a = spec.cls, spec.a
    if c == "A3":
        return x ** spec.m
    if c == "B2":
        return (x + a) ** 2
    if c == "D1":
        return np.abs(x - a)
    if c == "D2":
        return np.sign(x - a)
    q = _half_power(c, spec.m)
    if c in ("A1", "A2", "B1"):
        return x ** q
    d = x - a
    out = np.empty(d.shape, dtype=complex)
    pos = d >= 0
    out[pos] = d[pos] ** q
    out[~pos] = cmath.exp(1j * math.pi * q) * (-d[~pos]) ** q
    return out


def _phase(spec: IntegralSpec, x: np.ndarray) -> np.ndarray:
    if spec.cls in LINEAR_PHASE:
        return np.exp(1j * spec.r * x)
    return np.exp(1j * spec.r * x * x)


# ----------------------------------------------------------------- panels

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def panel_sum(lo: np.ndarray, hi: np.ndarray, f, n: int, chunk: int = 100_000) -> complex:
    """sum over panels [lo_i, hi_i] of the n-point Gauss rule applied to f."""
    nodes, weights = gauss_legendre(n)
    total = 0j
    for start in range(0, lo.size, chunk):
        a = lo[start:start + chunk, None]
        b = hi[start:start + chunk, None]
        half = 0.5 * (b - a)
        x = 0.5 * (a + b) + half * nodes[None, :]
        total += complex(np.sum(f(x) * (half * weights[None, :])))
    return total


def _phase_breaks(spec: IntegralSpec, lo: float, hi: float) -> np.ndarray:
    """Points where the phase advances by pi/4, restricted to (lo, hi)."""
    step = math.pi / (4 * spec.r)
    if spec.cls in LINEAR_PHASE:
        k0, k1 = math.ceil(lo / step), math.floor(hi / step)
        return np.arange(k0, k1 + 1) * step
    # r x^2 = k pi/4  ->  x = +/- sqrt(k step)
    pts = []
    for sign, end in ((1.0, hi), (-1.0, -lo)):
        if end > 0:
            kmax = math.floor(end * end / step)
            pts.append(sign * np.sqrt(np.arange(1, kmax + 1) * step))
    return np.concatenate(pts) if pts else np.empty(0)


def _breakpoints(spec: IntegralSpec, lo: float, hi: float, extra, base_panels: int = 64) -> np.ndarray:
    pts = [np.array([lo, hi]), np.linspace(lo, hi, base_panels + 1), _phase_breaks(spec, lo, hi)]
    special = [p for p in extra if p is not None and lo < p < hi]
    if spec.cls not in LINEAR_PHASE and lo < 0 < hi:
        special.append(0.0)
    pts.append(np.array(special, dtype=float))
    b = np.unique(np.concatenate(pts))
    return b[(b >= lo) & (b <= hi)]


def _integrate(spec: IntegralSpec, phi, breaks: np.ndarray, n: int) -> complex:
    lo, hi = breaks[:-1], breaks[1:]
    q = _half_power(spec.cls, spec.m)
    a = _singular_point(spec)
    if q is None or a is None:
        return panel_sum(lo, hi, lambda x: _plain_kernel(spec, x) * phi(x) * _phase(spec, x), n)

    total = 0j
    right = lo >= a
    left = hi <= a
    # power of s left after x = a +/- s^2: (s^2)^q * 2s = 2 s^{2q+1}
    ps = int(round(2 * q + 1))
    if right.any():
        def f_right(s):
            x = a + s * s
            return 2.0 * s ** ps * phi(x) * _phase(spec, x)
        total += panel_sum(np.sqrt(lo[right] - a), np.sqrt(hi[right] - a), f_right, n)
    if left.any():
        branch = cmath.exp(1j * math.pi * q)
        def f_left(s):
            x = a - s * s
            return 2.0 * branch * s ** ps * phi(x) * _phase(spec, x)
        total += panel_sum(np.sqrt(a - hi[left]), np.sqrt(a - lo[left]), f_left, n)
    return total


def eval_integral(spec: IntegralSpec, phi, rel_tol: float = 1e-8, abs_tol: float = 1e-10,
                  max_panels: int = 8_000_000) -> complex:
    """Evaluate one member of the family to max(abs_tol, rel_tol*|I|).

    Two Gauss rules (6 and 10 nodes) on the same panels give the error
    estimate; panels are bisected until it passes or the budget runs out.
    """
    validate_spec(spec)
    check_density(spec, phi)
    if getattr(phi, "is_zero", False):
        return 0j
    lo, hi = spec.interval()
    slo, shi = phi.support()
    lo, hi = max(lo, slo), min(hi, shi)
    if not lo < hi:
        return 0j
    extra = [_singular_point(spec), slo, shi]
    if spec.cls == "D1" or spec.cls == "D2":
        extra.append(spec.a)
    center = getattr(phi, "center", None)
    extra.append(center)
    breaks = _breakpoints(spec, lo, hi, extra)
    while True:
        coarse = _integrate(spec, phi, breaks, 6)
        fine = _integrate(spec, phi, breaks, 10)
        err = abs(fine - coarse)
        if err <= max(abs_tol, rel_tol * abs(fine)):
            return fine
        if 2 * (breaks.size - 1) > max_panels:
            raise ConvergenceError(f"{spec.cls}: panel budget exhausted at r={spec.r}", best=fine, bound=err)
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        breaks = np.sort(np.concatenate([breaks, mids]))


# ----------------------------------------------------------------- oracle

def _oracle_integrand(spec: IntegralSpec, phi, origin: float):
    """Integrand as a function of t = x - origin (origin = singular point)."""
    c, a, r, m = spec.cls, spec.a, spec.r, spec.m

    def f(t, cell_mid):
        # cell_mid tells which side of a jump the cell lies on
        t = np.asarray(t, dtype=float)
        x = origin + t
        if c in ("C1", "C2"):
            z = t.astype(complex)  # origin == a, principal powers via complex arithmetic
            k = z ** -0.5 if c == "C1" else z ** 0.5
        elif c == "A1":
            k = t ** -0.5
        elif c == "A2":
            k = t ** (m - 0.5)
        elif c == "A3":
            k = x ** m
        elif c == "B1":
            k = np.sqrt(t)
        elif c == "B2":
            k = (x + a) ** 2
        elif c == "D1":
            k = np.abs(x - a)
        else:
            k = np.where(origin + cell_mid > a, 1.0, -1.0)
        ph = r * x if c in LINEAR_PHASE else r * x * x
        return k * phi(x) * (np.cos(ph) + 1j * np.sin(ph))

    return f


def oracle_integral(spec: IntegralSpec, phi, tol: float = 1e-12, max_depth: int = 60) -> complex:
    """Brute-force reference value, accurate to about ``tol`` in absolute terms.

    Works in the shifted variable t = x - s0 where s0 is the singular point,
    so the geometric layers can approach it far below the spacing of floats
    near s0.
    """
    if tol < 1e-12:
        raise ParameterError("oracle tolerance must be >= 1e-12")
    validate_spec(spec)
    check_density(spec, phi)
    if getattr(phi, "is_zero", False):
        return 0j
    lo, hi = spec.interval()
    slo, shi = phi.support()
    lo, hi = max(lo, slo), min(hi, shi)
    if not lo < hi:
        return 0j

    singular = spec.cls in ("A1", "A2", "B1", "C1", "C2")
    origin = spec.a if spec.cls in ("C1", "C2") else 0.0
    f = _oracle_integrand(spec, phi, origin)

    cuts = {lo - origin, hi - origin}
    if singular and lo - origin < 0.0 < hi - origin:
        cuts.add(0.0)
    for p in (spec.a if spec.cls[0] == "D" else None,
              0.0 if spec.cls not in LINEAR_PHASE else None,
              getattr(phi, "center", None)):
        if p is not None and lo < p < hi:
            cuts.add(p - origin)
    cuts = sorted(cuts)
    span = hi - lo

    # starting cells: a few per oscillation, plus geometric layers (ratio 1/2)
    # on each side of the singular point t = 0
    reach = max(abs(lo), abs(hi))
    osc = spec.r * span if spec.cls in LINEAR_PHASE else spec.r * reach * span
    n0 = max(16, int(math.ceil(osc * 2 / math.pi)))
    edges_a, edges_b = [], []
    for u, v in zip(cuts[:-1], cuts[1:]):
        width = v - u
        toward = None
        if singular and u == 0.0:
            toward = +1
        elif singular and v == 0.0:
            toward = -1
        if toward is None:
            g = np.linspace(u, v, max(2, int(n0 * width / span) + 2))
            edges_a.append(g[:-1])
            edges_b.append(g[1:])
            continue
        w = width / 2
        core = np.linspace(w, width, max(2, int(n0 * w / span) + 2))
        layers = [w]
        while 2.0 * math.sqrt(layers[-1]) >= tol / 10 and len(layers) < 400:
            layers.append(layers[-1] / 2)
        pts = np.concatenate([np.array(layers[::-1]), core[1:]])
        if toward > 0:
            edges_a.append(pts[:-1])
            edges_b.append(pts[1:])
        else:
            edges_a.append(-pts[1:][::-1])
            edges_b.append(-pts[:-1][::-1])
    a = np.concatenate(edges_a)
    b = np.concatenate(edges_b)
    keep = b > a
    a, b = a[keep], b[keep]
    # equal share of the budget per starting cell, halved on every split
    tol_i = np.full(a.size, tol / a.size)

    total = 0j
    depth = 0
    while a.size:
        if depth > max_depth:
            raise ConvergenceError("oracle: refinement depth exhausted", best=total, bound=None)
        mid = 0.5 * (a + b)
        q1, q3 = 0.5 * (a + mid), 0.5 * (mid + b)
        fa, fq1, fm, fq3, fb = (f(p, mid) for p in (a, q1, mid, q3, b))
        h = b - a
        s1 = h / 6 * (fa + 4 * fm + fb)
        s2 = h / 12 * (fa + 4 * fq1 + 2 * fm + 4 * fq3 + fb)
        err = np.abs(s2 - s1) / 15
        done = err <= tol_i
        total += complex(np.sum(s2[done] + (s2[done] - s1[done]) / 15))
        a_n, b_n, m_n, t_n = a[~done], b[~done], mid[~done], tol_i[~done]
        a = np.concatenate([a_n, m_n])
        b = np.concatenate([m_n, b_n])
        tol_i = np.concatenate([t_n, t_n]) / 2
        depth += 1
    return total
