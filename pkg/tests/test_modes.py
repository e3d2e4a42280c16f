import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from radcond import bump, modes
from radcond.errors import ParameterError

CFG1 = modes.ProblemConfig(k=1.0, delta=0.45)
G1 = bump.two_sided(0.0, 0.4)


def direct_mode(weight, j, g, cfg, a0, x1, x2):
    """Plain adaptive quadrature in alpha, split at alpha0 and the cut-offs."""
    def w(a):
        d = a - a0
        if weight == "smooth":
            return 1.0
        if weight == "sqrt":
            return cmath.sqrt(d)
        return abs(d)

    def f(a):
        xi = a + j
        beta = 1j * cmath.sqrt(cfg.k ** 2 - xi ** 2 + 0j)
        return w(a) * g(a) * cmath.exp(1j * xi * x1 + beta * (x2 - cfg.H))

    lo, hi = g.support()
    pts = sorted(p for p in {a0, cfg.k - j, -cfg.k - j} if lo < p < hi)
    re = quad(lambda a: f(a).real, lo, hi, points=pts or None, limit=400, epsabs=1e-14, epsrel=1e-12)[0]
    im = quad(lambda a: f(a).imag, lo, hi, points=pts or None, limit=400, epsabs=1e-14, epsrel=1e-12)[0]
    return re + 1j * im


def test_classification_integer_case():
    ms = modes.classify_modes(CFG1, 0.0)
    assert ms.j_minus == (0,) and ms.j_zero == (-1, 1)
    assert ms.regime(3) == "evanescent"
    assert CFG1.case == "II-integer" and CFG1.lambda_kind == "centered"


def test_classification_half_and_generic():
    half = modes.ProblemConfig(k=0.5, delta=0.45)
    assert half.case == "II-half" and half.singular_set == (0.5,)
    ms = modes.classify_modes(half, 0.5)
    assert ms.j_zero == (-1, 0) and ms.j_minus == ()
    gen = modes.ProblemConfig(k=math.sqrt(2), delta=0.08)
    assert gen.case == "I" and gen.singular_set == pytest.approx((-gen.kappa, gen.kappa))
    assert modes.classify_modes(gen, gen.kappa).j_zero == (1,)


def test_window_must_fit_alpha_interval():
    with pytest.raises(ParameterError):
        modes.ProblemConfig(k=math.sqrt(2), delta=0.09)
    with pytest.raises(ParameterError):
        modes.ProblemConfig(k=1.0, case="I")


@given(st.floats(0.05, 6.0))
def test_min_truncation_keeps_cutoffs(k):
    jm = modes.min_truncation(k)
    assert jm >= k + 0.5  # every |alpha + j| = k mode is inside, plus one evanescent mode
    with pytest.raises(ParameterError):
        modes.classify_modes(modes.ProblemConfig(k=1.0, delta=0.1), 0.0, j_max=modes.min_truncation(1.0) - 1)


def test_alpha0_must_be_singular():
    with pytest.raises(ParameterError):
        modes.classify_modes(CFG1, 0.2)


@given(st.floats(-0.5, 0.5), st.floats(-20, 20), st.floats(0, 3))
def test_rayleigh_quasi_periodic(alpha, x1, dz):
    rng = np.random.default_rng(7)
    coef = {j: complex(*rng.normal(size=2)) for j in range(-3, 4)}
    fld = modes.RayleighField(alpha, coef, k=1.3, H=1.0)
    a = modes.rayleigh_eval(fld, x1 + 2 * math.pi, 1.0 + dz)
    b = modes.rayleigh_eval(fld, x1, 1.0 + dz)
    assert abs(a - cmath.exp(2j * math.pi * alpha) * b) <= 1e-12 * max(1.0, abs(b))


def test_vertical_factor_branches():
    assert modes.vertical_factor(0.6, 1.0) == pytest.approx(0.8j)
    assert modes.vertical_factor(1.25, 1.0) == pytest.approx(-0.75)


def test_evanescent_mode_decays_with_height():
    vals = [abs(modes.synth_mode_field("smooth", 3, G1, CFG1, 0.0, (0.3, CFG1.H + z))) for z in (0.5, 1, 2, 4)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("weight,j,x", [
    ("sqrt", 0, (3.0, 3.0)), ("abs", 0, (-12.0, 2.0)), ("sqrt", 1, (5.0, 1.5)),
    ("sqrt", -1, (40.0, 8.0)), ("abs", 2, (0.7, 1.6)), ("smooth", 0, (100.0, 30.0)),
])
def test_mode_field_matches_direct_quadrature(weight, j, x):
    v = modes.synth_mode_field(weight, j, G1, CFG1, 0.0, x)
    assert abs(v - direct_mode(weight, j, G1, CFG1, 0.0, *x)) < 1e-10


def test_one_sided_density_matches_direct():
    g = bump.one_sided(0.0, 0.44, "left")
    x = (7.0, 4.0)
    assert abs(modes.synth_mode_field("sqrt", 1, g, CFG1, 0.0, x) - direct_mode("sqrt", 1, g, CFG1, 0.0, *x)) < 1e-10


@pytest.mark.parametrize("weight", ["sqrt", "abs", "smooth"])
def test_helmholtz_stencil_second_order(weight):
    ev = modes.mode_sum_evaluator(weight, [(0, G1), (1, G1)], CFG1, 0.0)
    x1, x2 = np.array(2.3), np.array(CFG1.H + 2.0)
    r1 = abs(modes.helmholtz_residual(ev, x1, x2, CFG1.k, 0.1))
    r2 = abs(modes.helmholtz_residual(ev, x1, x2, CFG1.k, 0.05))
    assert r1 / r2 == pytest.approx(4.0, rel=0.05)


def test_radial_derivative_fd():
    r, th = 30.0, 1.1
    d = modes.radial_derivative("sqrt", 0, G1, CFG1, 0.0, modes.polar_point(CFG1, r, th))
    h = 1e-4
    fd = (modes.synth_mode_field("sqrt", 0, G1, CFG1, 0.0, modes.polar_point(CFG1, r + h, th))
          - modes.synth_mode_field("sqrt", 0, G1, CFG1, 0.0, modes.polar_point(CFG1, r - h, th))) / (2 * h)
    assert abs(d - fd) < 1e-7


def test_steep_evanescent_ray_is_negligible():
    res = modes.radiation_residual("sqrt", 2, G1, CFG1, 0.0, 50.0, math.pi / 2)
    assert abs(res) < 1e-12


def test_propagating_geometry_window():
    geo = modes.propagating_geometry(CFG1, 0.0, 0, 1.3, 10.0)
    assert geo.theta0 == pytest.approx(math.pi / 2)
    assert geo.beta1 == pytest.approx(math.acos(0.45)) and geo.beta2 == pytest.approx(math.acos(-0.45))
    with pytest.raises(ParameterError):
        modes.propagating_geometry(CFG1, 0.0, 1, 1.3, 10.0)


def test_standoff_and_window_checks():
    with pytest.raises(ParameterError):
        modes.synth_mode_field("sqrt", 0, G1, CFG1, 0.0, (0.0, CFG1.H))
    with pytest.raises(ParameterError):
        modes.synth_mode_field("sqrt", 0, bump.two_sided(0.0, 0.6), CFG1, 0.0, (0.0, 3.0))
    with pytest.raises(ParameterError):
        modes.synth_mode_field("sqrt", 40, G1, CFG1, 0.0, (0.0, 3.0))


def test_smooth_clean_modes_decay_fast_across_cells():
    # no cut-off inside the window: the cell sup norm falls off faster than any low power
    ev = modes.mode_sum_evaluator("smooth", [(0, G1), (2, G1), (-2, G1)], CFG1, 0.0)
    a = modes.cell_sup_norm(ev, 16, CFG1, 16)
    b = modes.cell_sup_norm(ev, 64, CFG1, 16)
    assert b / a < (17 / 65) ** 4


def test_cell_norm_of_plane_wave():
    # |e^{i x1}| = 1 on a (2 pi) x (h + 1/2) cell: L2 part 2 pi (h + 1/2), gradient part the same
    cfg = modes.ProblemConfig(k=1.0, delta=0.45)
    n = modes.cell_h1_norm(lambda x1, x2: np.exp(1j * x1) + 0 * x2, 3, cfg, 256)
    area = 2 * math.pi * (cfg.h + 0.5)
    assert n == pytest.approx(math.sqrt(2 * area), rel=1e-3)


def test_config_round_trip():
    cfg = modes.ProblemConfig(k=0.5, delta=0.3)
    assert modes.ProblemConfig.from_dict(cfg.to_dict()) == cfg
