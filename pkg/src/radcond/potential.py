"""Free-space and half-space Green's functions, the layer kernels S and K, and
the upward-propagating layer potential

    u(x) = 2 int_{y2 = H} dPhi(x, y)/dy2 phi(y1) dy1

with Phi(x, y) = (i/4) H_0^(1)(k|x - y|).  S is the y2-derivative of Phi and
K = d/dr S - i k S is the kernel of the radiation residual du/dr - i k u, with
r measured from (0, H).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConvergenceError, DomainError, ParameterError
from .oscint import gauss_legendre
from .specfun import hankel1_array

N_GAUSS = 16


def _dist(x, y) -> float:
    d = math.hypot(x[0] - y[0], x[1] - y[1])
    if d == 0.0:
        raise DomainError("coincident source and observation points")
    return d


def fundamental(x, y, k: float) -> complex:
    d = _dist(x, y)
    return complex(0.25j * hankel1_array(0, np.array([k * d]))[0])


def green_half_space(x, y, k: float) -> complex:
    """Dirichlet Green's function of the upper half plane x2 > 0."""
    y_img = (y[0], -y[1])
    return fundamental(x, y, k) - fundamental(x, y_img, k)


@dataclass(frozen=True)
class KernelPoint:
    x: tuple
    y: tuple
    k: float
    H: float = 0.0
    h: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x", (float(self.x[0]), float(self.x[1])))
        object.__setattr__(self, "y", (float(self.y[0]), float(self.y[1])))
        if abs(self.y[1] - self.H) > 1e-12:
            raise ParameterError("y must lie on the line y2 = H")
        if not self.x[1] - self.H > 0 or self.x[1] - self.H < self.h:
            raise ParameterError("x must lie strictly above the line, at least h above it")
        if not self.k > 0:
            raise ParameterError("k must be > 0")
        _dist(self.x, self.y)

    @property
    def x_tilde(self) -> tuple:
        return (self.x[0], self.x[1] - self.H)

    @property
    def r(self) -> float:
        return math.hypot(*self.x_tilde)


def _s_kernel(k, x1, x2, y1, H):
    """Vectorised S over arrays; x2 - H > 0 assumed."""
    z = x2 - H
    R = np.hypot(x1 - y1, z)
    return 0.25j * k * (z / R) * hankel1_array(1, k * R)


def _k_kernel(k, x1, x2, y1, H):
    z = x2 - H
    d1 = x1 - y1
    R = np.hypot(d1, z)
    rt = np.hypot(x1, z)
    dot = x1 * d1 + z * z  # <x_tilde, x - y>
    h0 = hankel1_array(0, k * R)
    h1 = hankel1_array(1, k * R)
    return (
        0.25j * k * h1 * (z / (rt * R) - 2 * dot * z / (rt * R ** 3))
        + 0.25j * k * k * dot * z / (rt * R * R) * h0
        + 0.25 * k * k * z / R * h1
    )


def kernel_S(p: KernelPoint) -> complex:
    return complex(_s_kernel(p.k, np.array([p.x[0]]), np.array([p.x[1]]), np.array([p.y[0]]), p.H)[0])


def kernel_K(p: KernelPoint) -> complex:
    if p.r == 0.0:
        raise DomainError("K needs x away from the polar origin (0, H)")
    return complex(_k_kernel(p.k, np.array([p.x[0]]), np.array([p.x[1]]), np.array([p.y[0]]), p.H)[0])


def geometry_gap(p: KernelPoint) -> float:
    """1 - cos of the angle between x_tilde and x - y, computed as 2 sin^2(angle/2)."""
    a = p.x_tilde
    b = (p.x[0] - p.y[0], p.x[1] - p.y[1])
    cross = abs(a[0] * b[1] - a[1] * b[0])
    dot = a[0] * b[0] + a[1] * b[1]
    ang = math.atan2(cross, dot)
    return 2.0 * math.sin(0.5 * ang) ** 2


# ------------------------------------------------------------- line densities

@dataclass
class LineDensity:
    """phi(y1) on the line y2 = H with declared decay |phi(y1)| <= C |y1|^{-p}.

    ``func`` must accept numpy arrays.  ``support`` (if given) is a hull outside
    which phi vanishes; ``scale`` is the shortest feature length, used to size
    quadrature panels.
    """

    func: Callable
    decay_exponent: float
    decay_constant: float
    support: Optional[tuple] = None
    scale: float = 1.0

    def __call__(self, y1):
        y1 = np.asarray(y1, dtype=float)
        out = np.asarray(self.func(y1), dtype=complex)
        if self.support is not None:
            out = np.where((y1 >= self.support[0]) & (y1 <= self.support[1]), out, 0.0)
        return out

    @classmethod
    def zero(cls) -> "LineDensity":
        return cls(lambda y: np.zeros(np.shape(y), dtype=complex), math.inf, 0.0, (0.0, 0.0))

    @classmethod
    def from_samples(cls, y1, values, decay_exponent: float, decay_constant: float) -> "LineDensity":
        """Cubic-spline interpolant of sampled values; zero outside the sample range."""
        from scipy.interpolate import CubicSpline

        y1 = np.asarray(y1, dtype=float)
        values = np.asarray(values, dtype=complex)
        order = np.argsort(y1)
        y1, values = y1[order], values[order]
        if y1.size < 4 or np.any(np.diff(y1) <= 0):
            raise ParameterError("need at least 4 distinct sample abscissae")
        sr = CubicSpline(y1, values.real)
        si = CubicSpline(y1, values.imag)
        spacing = float(np.min(np.diff(y1)))
        return cls(lambda y: sr(y) + 1j * si(y), decay_exponent, decay_constant,
                   (float(y1[0]), float(y1[-1])), max(spacing, 1e-3))

    @classmethod
    def from_csv(cls, path, decay_exponent: float, decay_constant: float) -> "LineDensity":
        """Columns y1, re, im (header optional)."""
        try:
            data = np.genfromtxt(path, delimiter=",", dtype=float)
        except OSError as exc:
            raise OSError(f"cannot read density table {path}: {exc}") from exc
        data = data[~np.isnan(data).any(axis=1)]
        return cls.from_samples(data[:, 0], data[:, 1] + 1j * data[:, 2], decay_exponent, decay_constant)


@dataclass(frozen=True)
class LayerValue:
    value: complex
    tail_bound: float
    n_nodes: int


def _tail_bound(density: LineDensity, k: float, z: float, L: float) -> float:
    # |S| <= (k/4) z |H_1(kR)| / R <= c z R^{-3/2}, with |H_1(t)| <= sqrt(2/(pi t)) (1 + 1/t)
    if density.decay_constant == 0.0:
        return 0.0
    p = density.decay_exponent
    c_s = 0.25 * k * z * math.sqrt(2 / (math.pi * k)) * (1 + 1 / (k * L))
    # two half-lines, factor 2 from the potential, R >= |y1| - |x1| >= L/2
    return 2 * 2 * density.decay_constant * c_s * 2 ** (1.5 + p) * L ** (-(0.5 + p)) / (0.5 + p)


def _nodes(xs, L: float, k: float, scale: float, lo: float, hi: float):
    """Gauss nodes on [lo, hi] with panels <= min(pi/(4k), scale), refined near each x1."""
    step = min(math.pi / (4 * k), scale)
    n = max(1, int(math.ceil((hi - lo) / step)))
    edges = [np.linspace(lo, hi, n + 1)]
    for x1, z in xs:
        ring = x1 + z * np.array([-4, -2, -1, -0.5, -0.25, 0.0, 0.25, 0.5, 1, 2, 4])
        edges.append(ring[(ring > lo) & (ring < hi)])
    e = np.unique(np.concatenate(edges))
    gx, gw = gauss_legendre(N_GAUSS)
    a, b = e[:-1, None], e[1:, None]
    half = 0.5 * (b - a)
    return (0.5 * (a + b) + half * gx).ravel(), (half * gw).ravel()


def _check_points(points, H: float, h: float, L: float):
    for x1, x2 in points:
        if x2 - H < h or x2 - H <= 0:
            raise ParameterError("evaluation points need x2 >= H + h > H")
        r = math.hypot(x1, x2 - H)
        if L < 10 * math.sqrt(r) - 1e-9:
            raise ParameterError(f"truncation L={L} is below 10 sqrt(r) = {10 * math.sqrt(r):.4g}")


def _layer(density, points, k, H, h, L, kernels, tol, tail_factors):
    """Shared driver: one node set and one density sweep for every kernel."""
    points = [(float(a), float(b)) for a, b in points]
    _check_points(points, H, h, L)
    lo, hi = -L, L
    if density.support is not None:
        lo, hi = max(lo, density.support[0]), min(hi, density.support[1])
    tails = [[f * _tail_bound(density, k, x2 - H, L) for _, x2 in points] for f in tail_factors]
    if tol is not None:
        worst = max(max(t) for t in tails)
        if worst > tol:
            raise ConvergenceError(f"tail bound {worst:.3g} exceeds tol {tol:.3g}; increase L", None, worst)
    if hi <= lo:
        return [[LayerValue(0j, t, 0) for t in tk] for tk in tails]
    y, w = _nodes([(x1, x2 - H) for x1, x2 in points], L, k, density.scale, lo, hi)
    phi_w = density(y) * w
    out = []
    for kernel, tk in zip(kernels, tails):
        vals = []
        for (x1, x2), t in zip(points, tk):
            vals.append(LayerValue(complex(2 * np.sum(kernel(k, x1, x2, y, H) * phi_w)), t, y.size))
        out.append(vals)
    return out


def _k_tail_factor(points, k, H):
    # |K| <= (2k + 3/r) times the S envelope (triangle inequality on the closed form)
    for x1, x2 in points:
        if x1 == 0.0 and x2 == H:
            raise DomainError("radial derivative undefined at the polar origin")
    rmin = min(math.hypot(x1, x2 - H) for x1, x2 in points)
    return 2 * k + 3 / rmin


def uprc_eval(density: LineDensity, x, truncation_L: float, k: float, H: float = 0.0, h: float = 0.0,
              tol: Optional[float] = None) -> LayerValue:
    """2 int_{-L}^{L} S(x, (y1, H)) phi(y1) dy1 with a tail bound for |y1| > L.

    Raises ConvergenceError when ``tol`` is given and the tail bound exceeds it.
    """
    return uprc_eval_many(density, [x], truncation_L, k, H, h, tol)[0]


def uprc_eval_many(density, points, truncation_L, k, H=0.0, h=0.0, tol=None) -> list:
    """uprc_eval at many points, sampling the density once on a shared grid."""
    return _layer(density, points, k, H, h, truncation_L, (_s_kernel,), tol, (1.0,))[0]


def uprc_residual_many(density, points, truncation_L, k, H=0.0, h=0.0, tol=None) -> list:
    """du/dr - i k u of the layer potential, through the kernel K (r about (0, H))."""
    f = _k_tail_factor(points, k, H)
    return _layer(density, points, k, H, h, truncation_L, (_k_kernel,), tol, (f,))[0]


def uprc_residual(density, x, truncation_L, k, H=0.0, h=0.0, tol=None) -> LayerValue:
    return uprc_residual_many(density, [x], truncation_L, k, H, h, tol)[0]


def uprc_field_and_residual(density, points, truncation_L, k, H=0.0, h=0.0, tol=None):
    """(u values, du/dr - i k u values) from a single density sweep."""
    f = _k_tail_factor(points, k, H)
    u, res = _layer(density, points, k, H, h, truncation_L, (_s_kernel, _k_kernel), tol, (1.0, f))
    return u, res
