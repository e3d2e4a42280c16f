"""Smooth compactly supported test densities with exact derivatives.

The base profile is ``f(u) = exp(1 - 1/(1 - u^2))`` on ``|u| < 1``.  Writing
``q = 1 - u^2``, every derivative has the form ``f^(n) = P_n(u) f / q^(2n)``
with

    P_{n+1} = P_n' q^2 + 4 n u q P_n - 2 u P_n,

which is what ``_profile`` evaluates.

A one-sided density keeps only half of the profile: with ``side="right"`` it
lives on ``[center, center + halfwidth)``, equals 1 at the center, and is flat
to all orders at the far end only.  It is meant to be integrated from its
center (the ``[0, delta]`` integrals), so the jump at the center is on
purpose.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial

from .errors import ParameterError

KINDS = ("two-sided-bump", "one-sided-bump", "zero", "power-law-modulated")
SIDES = ("left", "right", "both")
MAX_ORDER = 4


@lru_cache(maxsize=None)
def _numerators(n_max: int = MAX_ORDER) -> tuple[Polynomial, ...]:
    u = Polynomial([0.0, 1.0])
    q = 1 - u * u
    polys = [Polynomial([1.0])]
    for n in range(n_max):
        p = polys[-1]
        polys.append(p.deriv() * q * q + 4 * n * u * q * p - 2 * u * p)
    return tuple(polys)


def _profile(u: np.ndarray, order: int) -> np.ndarray:
    """order-th u-derivative of the base profile; exactly 0 for |u| >= 1."""
    out = np.zeros_like(u, dtype=float)
    inside = np.abs(u) < 1
    if inside.any():
        ui = u[inside]
        q = 1.0 - ui * ui
        f = np.exp(1.0 - 1.0 / q)
        if order == 0:
            out[inside] = f
        else:
            out[inside] = _numerators()[order](ui) * f / q ** (2 * order)
    return out


@dataclass(frozen=True)
class Density:
    kind: str = "two-sided-bump"
    center: float = 0.0
    halfwidth: float = 1.0
    side: str = "both"
    modulation_power: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown density kind {self.kind!r}")
        if self.side not in SIDES:
            raise ParameterError(f"unknown side {self.side!r}")
        if self.kind != "zero" and not self.halfwidth > 0:
            raise ParameterError("halfwidth must be positive")
        if self.kind == "one-sided-bump" and self.side == "both":
            raise ParameterError("one-sided bump needs side left or right")
        if self.kind == "two-sided-bump" and self.side != "both":
            raise ParameterError("two-sided bump needs side both")
        if int(self.modulation_power) != self.modulation_power or self.modulation_power < 0:
            raise ParameterError("modulation_power must be a non-negative integer")

    # -- geometry
    def support(self) -> tuple[float, float]:
        """Closed hull of the support; (0, 0) for the zero density."""
        if self.kind == "zero":
            return (0.0, 0.0)
        lo = self.center - self.halfwidth
        hi = self.center + self.halfwidth
        if self.side == "right":
            lo = self.center
        elif self.side == "left":
            hi = self.center
        return (lo, hi)

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    # -- evaluation
    def _base(self, x: np.ndarray, order: int) -> np.ndarray:
        w = self.halfwidth
        u = (x - self.center) / w
        vals = _profile(u, order) / w ** order
        if self.side == "right":
            vals[u < 0] = 0.0
        elif self.side == "left":
            vals[u > 0] = 0.0
        return vals

    def __call__(self, x, order: int = 0):
        return evaluate(self, x, order)

    # -- serialization
    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Density":
        return cls(**{k: data[k] for k in ("kind", "center", "halfwidth", "side", "modulation_power") if k in data})


def evaluate(d: Density, x, derivative_order: int = 0):
    """Value (or derivative up to order 4) of a density; scalar in, scalar out."""
    if not 0 <= derivative_order <= MAX_ORDER:
        raise ParameterError(f"derivative order {derivative_order} outside 0..{MAX_ORDER}")
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if d.kind == "zero":
        out = np.zeros_like(xa)
    elif d.modulation_power == 0:
        out = d._base(xa, derivative_order)
    else:
        p = d.modulation_power
        dx = xa - d.center
        out = np.zeros_like(xa)
        for k in range(derivative_order + 1):
            if k > p:
                break
            falling = math.perm(p, k)
            out += math.comb(derivative_order, k) * falling * dx ** (p - k) * d._base(xa, derivative_order - k)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class DensitySum:
    """Linear combination sum_i c_i phi_i with the Density call interface."""

    terms: tuple  # ((coef, Density), ...)

    def __call__(self, x, order: int = 0):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for c, d in self.terms:
            out = out + c * evaluate(d, x, order)
        if all(np.isreal(c) for c, _ in self.terms):
            return out.real
        return out

    def support(self) -> tuple[float, float]:
        live = [d.support() for _, d in self.terms if not d.is_zero]
        if not live:
            return (0.0, 0.0)
        return (min(s[0] for s in live), max(s[1] for s in live))

    @property
    def is_zero(self) -> bool:
        return all(d.is_zero for _, d in self.terms)


def superpose(*pairs) -> DensitySum:
    """superpose((a, phi1), (b, phi2), ...) -> a*phi1 + b*phi2 + ..."""
    return DensitySum(tuple(pairs))


# convenience constructors
def two_sided(center: float = 0.0, halfwidth: float = 1.0) -> Density:
    return Density("two-sided-bump", center, halfwidth, "both", 0)


def one_sided(center: float = 0.0, halfwidth: float = 1.0, side: str = "right") -> Density:
    return Density("one-sided-bump", center, halfwidth, side, 0)


def modulated(center: float, halfwidth: float, power: int, side: str = "both") -> Density:
    return Density("power-law-modulated", center, halfwidth, side, power)


def zero() -> Density:
    return Density("zero", 0.0, 1.0, "both", 0)
