import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radcond import fbt
from radcond.errors import ParameterError


@st.composite
def cell_arrays(draw):
    n_cells = draw(st.integers(1, 6))
    idx = draw(st.lists(st.integers(-6, 6), min_size=n_cells, max_size=n_cells, unique=True))
    grid = draw(st.integers(1, 12))
    seed = draw(st.integers(0, 2 ** 31))
    rng = np.random.default_rng(seed)
    return fbt.CellArray({j: rng.normal(size=grid) + 1j * rng.normal(size=grid) for j in idx}, grid)


@given(cell_arrays(), st.sampled_from(fbt.LAMBDA_KINDS), st.integers(13, 40))
def test_round_trip(data, kind, n_alpha):
    back = fbt.fb_inverse(fbt.fb_transform(data, n_alpha, kind))
    assert back.max_abs_diff(data) < 1e-12


@given(cell_arrays(), st.sampled_from(fbt.LAMBDA_KINDS))
def test_quasi_periodicity(data, kind):
    # phi(x + 2 pi) has cell j equal to old cell j + 1
    bl = fbt.fb_transform(data, 16, kind)
    moved = fbt.fb_transform(data.shifted(-1), 16, kind)
    assert np.max(np.abs(moved.values - bl.at_cell(1))) < 1e-12


@given(cell_arrays(), st.sampled_from(fbt.LAMBDA_KINDS))
def test_parseval(data, kind):
    bl = fbt.fb_transform(data, 16, kind)
    assert bl.energy() == pytest.approx(data.energy(), rel=1e-12)


def test_sign_convention_single_cell():
    data = fbt.CellArray({1: np.ones(3)}, 3)
    bl = fbt.fb_transform(data, 8)
    expected = np.exp(-2j * np.pi * bl.alpha_grid)
    assert np.allclose(bl.values[:, 0], expected, atol=1e-15)


def test_alpha_grids():
    assert np.allclose(fbt.alpha_grid(4), [-0.25, 0.0, 0.25, 0.5])
    assert np.allclose(fbt.alpha_grid(4, "shifted"), [0.25, 0.5, 0.75, 1.0])
    with pytest.raises(ParameterError):
        fbt.alpha_grid(4, "wrong")


def test_aliasing_guard():
    data = fbt.CellArray({5: np.ones(2)}, 2)
    with pytest.raises(ParameterError):
        fbt.fb_transform(data, 9)
    fbt.fb_transform(data, 11)


def test_too_many_cells():
    data = fbt.CellArray({j: np.ones(2) for j in range(-2, 3)}, 2)
    with pytest.raises(ParameterError):
        fbt.fb_transform(data, 10)


def test_mismatched_cells_rejected():
    with pytest.raises(ParameterError):
        fbt.CellArray({0: np.ones(2), 1: np.ones(3)})


def test_serialization_round_trip():
    data = fbt.CellArray({-1: np.array([1 + 2j, 3.0]), 2: np.array([0.5j, -1.0])}, 2)
    again = fbt.CellArray.from_dict(json.loads(json.dumps(data.to_dict())))
    assert again.max_abs_diff(data) == 0
    bl = fbt.fb_transform(data, 7)
    bl2 = fbt.BlochArray.from_dict(json.loads(json.dumps(bl.to_dict())))
    assert np.array_equal(bl2.values, bl.values) and bl2.lambda_kind == bl.lambda_kind
