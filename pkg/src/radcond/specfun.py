"""Fresnel integrals, Gamma, and Hankel functions of the first kind (orders 0, 1).

Everything here is written from series and continued fractions so the rest of
the package does not depend on an external special-function library.  Scalar
entry points return small value objects; ``hankel1_array`` is the vectorised
workhorse used by the kernels and layer potentials.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

FRESNEL_SWITCH = 2.0
BESSEL_SWITCH = 12.0
FRESNEL_LIMIT = math.sqrt(math.pi / 8.0)
EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class FresnelPair:
    c: float
    s: float
    t: float


@dataclass(frozen=True)
class HankelValue:
    re: float
    im: float
    order: int
    t: float

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)


# ---------------------------------------------------------------- Fresnel

def _fresnel_series(t: float) -> tuple[float, float]:
    t4 = t ** 4
    tc, ts = t, t ** 3  # t^{4n+1}/(2n)!, t^{4n+3}/(2n+1)!
    c_terms, s_terms = [], []
    n = 0
    while True:
        sign = -1.0 if n % 2 else 1.0
        c_terms.append(sign * tc / (4 * n + 1))
        s_terms.append(sign * ts / (4 * n + 3))
        tc *= t4 / ((2 * n + 1) * (2 * n + 2))
        ts *= t4 / ((2 * n + 2) * (2 * n + 3))
        n += 1
        if n > 3 and abs(tc) < 1e-20 and abs(ts) < 1e-20:
            break
    return math.fsum(c_terms), math.fsum(s_terms)


def _fresnel_tail(t: float, nterms: int = 120) -> complex:
    """int_t^inf e^{i z^2} dz for t >= FRESNEL_SWITCH.

    Continued fraction of erfc at w = e^{-i pi/4} t; its convergents reproduce
    the large-t expansion  i e^{it^2}/(2t) + e^{it^2}/(4t^3) + ...
    """
    w = t * cmath.exp(-0.25j * math.pi)
    f = w
    for n in range(nterms, 0, -1):
        f = w + (0.5 * n) / f
    return 0.5 * cmath.exp(0.25j * math.pi) * cmath.exp(1j * t * t) / f


def fresnel(t: float) -> FresnelPair:
    """C(t) = int_0^t cos z^2 dz and S(t) = int_0^t sin z^2 dz."""
    t = float(t)
    if not math.isfinite(t):
        raise DomainError(f"fresnel: non-finite argument {t!r}")
    a = abs(t)
    if a <= FRESNEL_SWITCH:
        c, s = _fresnel_series(a)
    else:
        tail = _fresnel_tail(a)
        c, s = FRESNEL_LIMIT - tail.real, FRESNEL_LIMIT - tail.imag
    if t < 0:
        c, s = -c, -s
    return FresnelPair(c, s, t)


def fresnel_asymptotic(t: float) -> tuple[float, float]:
    """Two-term large-t form, useful as a sanity reference for t >= 5."""
    t2 = t * t
    c = FRESNEL_LIMIT + math.sin(t2) / (2 * t) - math.cos(t2) / (4 * t ** 3)
    s = FRESNEL_LIMIT - math.cos(t2) / (2 * t) - math.sin(t2) / (4 * t ** 3)
    return c, s


# ------------------------------------------------------------------ Gamma

_LANCZOS_G = 7
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Lanczos approximation (g=7, 9 terms) with reflection below 1/2."""
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise DomainError(f"gamma: pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma(1.0 - x))
    x -= 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (x + i)
    tt = x + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * tt ** (x + 0.5) * math.exp(-tt) * acc


def generalized_fresnel(m: int, n: int, half_power: bool = False) -> complex:
    """int_0^inf x^p e^{i x^n} dx = Gamma((p+1)/n) e^{i pi (p+1)/(2n)} / n.

    ``p = m`` normally and ``p = m - 1/2`` with ``half_power`` (so m=1 gives
    the sqrt(x) weight).  Values with (p+1)/n >= 1 are the Abel-summed ones.
    """
    if n == 0:
        raise DomainError("generalized_fresnel: n must be positive")
    if n < 0 or m < 0:
        raise DomainError("generalized_fresnel: need m >= 0 and n > 0")
    p = m - 0.5 if half_power else float(m)
    if p <= -1:
        raise DomainError("generalized_fresnel: power must exceed -1")
    q = (p + 1.0) / n
    return gamma(q) / n * cmath.exp(0.5j * math.pi * q)


# ----------------------------------------------------------------- Hankel

_SERIES_TERMS = 64
_ASYM_TERMS = 40


def _bessel_series(order: int, t: np.ndarray):
    """J_n and Y_n from the ascending series (fine up to t ~ 12)."""
    q = 0.25 * t * t
    logt = np.log(0.5 * t) + EULER_GAMMA
    if order == 0:
        term = np.ones_like(t)
        j = np.zeros_like(t)
        ysum = np.zeros_like(t)
        harmonic = 0.0
        for k in range(_SERIES_TERMS):
            if k > 0:
                term = term * (-q) / (k * k)
                harmonic += 1.0 / k
            j = j + term
            ysum = ysum - harmonic * term
        y = (2 / np.pi) * (logt * j + ysum)
        return j, y
    # order 1: term_k = (-q)^k / (k!(k+1)!)
    term = np.ones_like(t)
    s_j = np.zeros_like(t)
    s_y = np.zeros_like(t)
    h_k, h_k1 = 0.0, 1.0  # harmonic numbers H_k, H_{k+1}
    for k in range(_SERIES_TERMS):
        if k > 0:
            term = term * (-q) / (k * (k + 1))
            h_k += 1.0 / k
            h_k1 += 1.0 / (k + 1)
        s_j = s_j + term
        s_y = s_y + (h_k + h_k1) * term
    half = 0.5 * t
    j = half * s_j
    # psi(k+1)+psi(k+2) = H_k + H_{k+1} - 2 gamma; the -2 gamma part folds into logt
    y = (2 / np.pi) * logt * j - 2 / (np.pi * t) - (1 / np.pi) * half * s_y
    return j, y


def _asymptotic_coefficients(order: int) -> np.ndarray:
    """c_k with H ~ sqrt(2/(pi t)) e^{i(...)} sum_k c_k (i/t)^k."""
    mu = 4.0 * order * order
    c = [1.0]
    for k in range(1, _ASYM_TERMS):
        c.append(c[-1] * (mu - (2 * k - 1) ** 2) / (8.0 * k))
    return np.array(c)


def _asymptotic_degree(coef: np.ndarray, t_min: float) -> int:
    # truncate at the smallest term (or once terms are negligible) for the
    # smallest argument; larger arguments only make the tail smaller
    mags = np.abs(coef) / t_min ** np.arange(coef.size)
    deg = int(np.argmin(mags))
    small = np.nonzero(mags < 1e-17)[0]
    if small.size:
        deg = min(deg, int(small[0]))
    return deg


def _hankel_asymptotic(order: int, t: np.ndarray) -> np.ndarray:
    coef = _asymptotic_coefficients(order)
    out = np.empty(t.shape, dtype=complex)
    edges = [0.0, 20.0, 50.0, 200.0, 1e3, 1e5, np.inf]
    for lo, hi in zip(edges[:-1], edges[1:]):
        sel = (t >= lo) & (t < hi)
        if not sel.any():
            continue
        ts = t[sel]
        deg = _asymptotic_degree(coef, float(ts.min()))
        z = 1j / ts
        total = np.full(ts.shape, coef[deg], dtype=complex)
        for k in range(deg - 1, -1, -1):
            total = total * z + coef[k]
        phase = ts - 0.5 * order * np.pi - 0.25 * np.pi
        out[sel] = np.sqrt(2 / (np.pi * ts)) * np.exp(1j * phase) * total
    return out


def hankel1_array(order: int, t) -> np.ndarray:
    """Vectorised H_order^(1)(t) for real t > 0, order 0 or 1."""
    if order not in (0, 1):
        raise DomainError(f"hankel1: order {order} not supported")
    t = np.asarray(t, dtype=float)
    if np.any(~np.isfinite(t)) or np.any(t <= 0):
        raise DomainError("hankel1: argument must be finite and > 0")
    out = np.empty(t.shape, dtype=complex)
    small = t <= BESSEL_SWITCH
    if small.any():
        j, y = _bessel_series(order, t[small])
        out[small] = j + 1j * y
    if (~small).any():
        out[~small] = _hankel_asymptotic(order, t[~small])
    return out


def hankel1(order: int, t: float) -> HankelValue:
    t = float(t)
    if not (math.isfinite(t) and t > 0):
        raise DomainError(f"hankel1: argument must be > 0, got {t}")
    v = complex(hankel1_array(order, np.array([t]))[0])
    return HankelValue(v.real, v.imag, order, t)


def hankel1_derivative(order: int, t: float) -> complex:
    if order == 0:
        return -hankel1(1, t).value
    if order == 1:
        return hankel1(0, t).value - hankel1(1, t).value / t
    raise DomainError(f"hankel1_derivative: order {order} not supported")


def hankel_leading(order: int, t):
    """Leading large-argument term sqrt(2/(pi t)) e^{i(t - n pi/2 - pi/4)}."""
    t = np.asarray(t, dtype=float)
    return np.sqrt(2 / (np.pi * t)) * np.exp(1j * (t - 0.5 * order * np.pi - 0.25 * np.pi))
