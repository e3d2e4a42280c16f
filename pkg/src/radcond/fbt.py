"""Discrete Floquet-Bloch transform on cell-sampled data.

Cell j holds samples of phi(x + 2 pi j) on a fixed grid over one period.
The forward map is

    (J phi)(alpha, x) = sum_j phi(x + 2 pi j) e^{-i 2 pi alpha j},

which makes J phi alpha-quasi-periodic in x:
(J phi)(alpha, x + 2 pi) = e^{i 2 pi alpha} (J phi)(alpha, x).  The inverse
recovers cell j as the alpha-average of values * e^{i 2 pi alpha j}; on an
equispaced periodic alpha grid the trapezoid rule makes this exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError

LAMBDA_KINDS = ("centered", "shifted")


def alpha_grid(n_alpha: int, lambda_kind: str = "centered") -> np.ndarray:
    """n_alpha equispaced points filling (-1/2, 1/2] or (0, 1]."""
    if lambda_kind not in LAMBDA_KINDS:
        raise ParameterError(f"unknown lambda kind {lambda_kind!r}")
    m = np.arange(1, n_alpha + 1)
    start = -0.5 if lambda_kind == "centered" else 0.0
    return start + m / n_alpha


@dataclass
class CellArray:
    cells: dict = field(default_factory=dict)
    grid_size: int = 0

    def __post_init__(self):
        self.cells = {int(j): np.asarray(v, dtype=complex) for j, v in self.cells.items()}
        shapes = {v.shape for v in self.cells.values()}
        if len(shapes) > 1:
            raise ParameterError("all cells must share one sample grid")
        if shapes:
            shape = shapes.pop()
            if self.grid_size == 0:
                self.grid_size = shape[0]
            elif shape[0] != self.grid_size:
                raise ParameterError("grid_size does not match cell arrays")

    @property
    def sample_shape(self) -> tuple:
        for v in self.cells.values():
            return v.shape
        return (self.grid_size,)

    def get(self, j: int) -> np.ndarray:
        """Samples of cell j (zeros when absent)."""
        return self.cells.get(j, np.zeros(self.sample_shape, dtype=complex))

    def nonzero_cells(self) -> list[int]:
        return sorted(j for j, v in self.cells.items() if np.any(v != 0))

    def shifted(self, n: int) -> "CellArray":
        """Cell j moves to j + n (the data translated by -2 pi n)."""
        return CellArray({j + n: v.copy() for j, v in self.cells.items()}, self.grid_size)

    def max_abs_diff(self, other: "CellArray") -> float:
        keys = set(self.cells) | set(other.cells)
        return max((float(np.max(np.abs(self.get(j) - other.get(j)))) for j in keys), default=0.0)

    def energy(self) -> float:
        """sum over cells of sum |samples|^2 (plain discrete l2)."""
        return float(sum(np.sum(np.abs(v) ** 2) for v in self.cells.values()))

    def to_dict(self) -> dict:
        return {
            "grid_size": self.grid_size,
            "cells": {str(j): np.stack([v.real, v.imag], axis=-1).tolist() for j, v in sorted(self.cells.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CellArray":
        cells = {}
        for j, pairs in d["cells"].items():
            arr = np.asarray(pairs, dtype=float)
            cells[int(j)] = arr[..., 0] + 1j * arr[..., 1]
        return cls(cells, int(d["grid_size"]))


@dataclass
class BlochArray:
    alpha_grid: np.ndarray
    values: np.ndarray  # shape (n_alpha, *sample_shape)
    lambda_kind: str = "centered"

    def __post_init__(self):
        self.alpha_grid = np.asarray(self.alpha_grid, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.lambda_kind not in LAMBDA_KINDS:
            raise ParameterError(f"unknown lambda kind {self.lambda_kind!r}")
        if self.values.shape[0] != self.alpha_grid.size:
            raise ParameterError("values must have one row per alpha")

    @property
    def n_alpha(self) -> int:
        return self.alpha_grid.size

    def _phase(self, n) -> np.ndarray:
        shape = (self.n_alpha,) + (1,) * (self.values.ndim - 1)
        return np.exp(2j * np.pi * self.alpha_grid * n).reshape(shape)

    def at_cell(self, n: int) -> np.ndarray:
        """Values continued to x + 2 pi n by quasi-periodicity."""
        return self.values * self._phase(n)

    def energy(self) -> float:
        """alpha-mean of sum |values|^2."""
        return float(np.sum(np.abs(self.values) ** 2) / self.n_alpha)

    def to_dict(self) -> dict:
        return {
            "alpha_grid": self.alpha_grid.tolist(),
            "values": np.stack([self.values.real, self.values.imag], axis=-1).tolist(),
            "lambda_kind": self.lambda_kind,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BlochArray":
        arr = np.asarray(d["values"], dtype=float)
        return cls(np.asarray(d["alpha_grid"]), arr[..., 0] + 1j * arr[..., 1], d["lambda_kind"])


def max_recoverable_cell(n_alpha: int) -> int:
    return (n_alpha - 1) // 2


def fb_transform(data: CellArray, n_alpha: int, lambda_kind: str = "centered") -> BlochArray:
    nz = data.nonzero_cells()
    if n_alpha < 2 * len(nz) + 1:
        raise ParameterError(f"n_alpha={n_alpha} too small for {len(nz)} nonzero cells")
    if nz and max(abs(j) for j in nz) > max_recoverable_cell(n_alpha):
        raise ParameterError(
            f"cell index {max(abs(j) for j in nz)} aliases on a {n_alpha}-point alpha grid"
        )
    alphas = alpha_grid(n_alpha, lambda_kind)
    values = np.zeros((n_alpha,) + tuple(data.sample_shape), dtype=complex)
    tail = (1,) * len(data.sample_shape)
    for j, v in data.cells.items():
        values += np.exp(-2j * np.pi * alphas * j).reshape((n_alpha,) + tail) * v[None, ...]
    return BlochArray(alphas, values, lambda_kind)


def fb_inverse(bloch: BlochArray, cells=None) -> CellArray:
    """Recover cells (default: every index the grid resolves without aliasing)."""
    n = bloch.n_alpha
    if cells is None:
        jm = max_recoverable_cell(n)
        cells = range(-jm, jm + 1)
    out = {}
    for j in cells:
        out[int(j)] = np.mean(bloch._phase(j) * bloch.values, axis=0)
    sample_shape = bloch.values.shape[1:]
    return CellArray(out, sample_shape[0] if sample_shape else 1)
