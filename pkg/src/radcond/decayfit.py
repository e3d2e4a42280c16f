"""Power-law decay fits |F(r)| ~ C r^{-p} on log-log axes."""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from .errors import InsufficientData, ParameterError

NOISE_FLOOR = 1e-13


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    log_constant: float
    max_residual: float
    n_samples: int
    dropped: int
    # fit through the largest sample of each decade; None if < 2 decades survive
    envelope_exponent: Optional[float] = None
    envelope_log_constant: Optional[float] = None

    @property
    def headline(self) -> float:
        """Envelope exponent when available, plain least squares otherwise."""
        return self.exponent if self.envelope_exponent is None else self.envelope_exponent

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "DecayFit":
        return cls(**d)


def _line(logr: np.ndarray, logm: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(logr, logm, 1)
    return -float(slope), float(intercept)


def fit_decay(samples, noise_floor: float = NOISE_FLOOR, min_decades: float = 2.0) -> DecayFit:
    """Least-squares exponent from (r, magnitude) pairs.

    Samples below ``noise_floor`` are dropped.  The envelope fit keeps the
    largest magnitude per decade of r, which is the right statistic when the
    magnitudes oscillate under a sup-type bound.  ``min_decades`` relaxes the
    span requirement for sweeps with a fixed shorter range (cell indices).
    """
    pts = [(float(r), float(m)) for r, m in samples]
    if len(pts) < 4:
        raise ParameterError("fit_decay needs at least 4 samples")
    r = np.array([p[0] for p in pts])
    mag = np.array([p[1] for p in pts])
    if np.any(r <= 0) or np.any(mag < 0) or not np.all(np.isfinite(mag)):
        raise ParameterError("need r > 0 and finite magnitudes >= 0")
    if math.log10(r.max() / r.min()) < min_decades - 1e-9:
        raise ParameterError(f"samples must span at least {min_decades:g} decades in r")
    keep = mag >= noise_floor
    dropped = int((~keep).sum())
    if keep.sum() < 3:
        raise InsufficientData(f"only {int(keep.sum())} samples above the noise floor")
    logr, logm = np.log(r[keep]), np.log(mag[keep])
    p, logc = _line(logr, logm)
    resid = float(np.max(np.abs(logm - (logc - p * logr))))

    env_p = env_c = None
    decade = np.floor(np.log10(r[keep]) + 1e-9)
    groups = np.unique(decade)
    if groups.size >= 2:
        er, em = [], []
        for g in groups:
            sel = decade == g
            i = int(np.argmax(logm[sel]))
            er.append(logr[sel][i])
            em.append(logm[sel][i])
        env_p, env_c = _line(np.array(er), np.array(em))
    return DecayFit(p, logc, resid, len(pts), dropped, env_p, env_c)


def growth_ratio(values) -> float:
    """Largest factor by which a later value exceeds an earlier one.

    For a bounded sequence this stays O(1); a quantity that keeps growing with
    r makes it large.  Values below 1e-280 count as zero.
    """
    v = np.asarray(values, dtype=float)
    v = np.where(v < 1e-280, 0.0, v)
    worst = 0.0
    for i in range(v.size):
        for j in range(i + 1, v.size):
            if v[j] == 0.0:
                continue
            if v[i] == 0.0:
                return math.inf
            worst = max(worst, v[j] / v[i])
    return max(worst, 1.0) if v.size > 1 else 1.0


def spread_ratio(values) -> float:
    """max/min of a sequence of positive numbers (inf if any is zero)."""
    v = np.asarray(values, dtype=float)
    lo = v.min()
    return math.inf if lo <= 0 else float(v.max() / lo)
