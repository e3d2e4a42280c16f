import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from radcond import perturb
from radcond.errors import DegeneracyError, DomainError, ParameterError

SURF = perturb.preset_surface("flat-bumps", "bump", 0.1)


@pytest.mark.parametrize("zeta", list(perturb.ZETA_PRESETS))
@pytest.mark.parametrize("pert", perturb.P_PRESETS)
def test_identity_outside_box(zeta, pert):
    s = perturb.preset_surface(zeta, pert, 0.1)
    for x1 in (-s.L - 1.0, -s.L, s.L, s.L + 0.5):
        for x2 in np.linspace(s.zeta(x1), s.H - 1e-9, 7):
            A, c = perturb.coeffs_ap_cp(s, (x1, x2))
            assert np.array_equal(A, np.eye(2)) and c == 1.0
    for x1 in np.linspace(-s.L, s.L, 9):
        A, c = perturb.coeffs_ap_cp(s, (x1, s.H0))
        assert np.array_equal(A, np.eye(2)) and c == 1.0


@pytest.mark.parametrize("zeta", list(perturb.ZETA_PRESETS))
@pytest.mark.parametrize("pert", perturb.P_PRESETS)
def test_boundary_maps_to_perturbed_boundary(zeta, pert):
    s = perturb.preset_surface(zeta, pert, 0.1)
    for x1 in np.linspace(-s.L - 1, s.L + 1, 57):
        zt = s.zeta(x1)
        y = perturb.phi_p(s, (x1, zt))
        assert y[0] == x1 and y[1] == zt + s.p_value(x1)


@given(st.floats(-2.9, 2.9), st.floats(0.0, 1.0))
def test_jacobian_matches_finite_differences(x1, u):
    x2 = SURF.zeta(x1) + 1e-3 + u * (SURF.H0 - SURF.zeta(x1) - 2e-3)
    J = perturb.jacobian(SURF, (x1, x2))
    e = 1e-6
    d1 = (np.array(perturb.phi_p(SURF, (x1 + e, x2))) - np.array(perturb.phi_p(SURF, (x1 - e, x2)))) / (2 * e)
    d2 = (np.array(perturb.phi_p(SURF, (x1, x2 + e))) - np.array(perturb.phi_p(SURF, (x1, x2 - e)))) / (2 * e)
    assert np.allclose(J, np.column_stack([d1, d2]), atol=1e-7)


@given(st.floats(-2.9, 2.9), st.floats(0.0, 1.0))
def test_coefficients_are_spd(x1, u):
    x2 = SURF.zeta(x1) + u * (SURF.H - 1e-9 - SURF.zeta(x1))
    A, c = perturb.coeffs_ap_cp(SURF, (x1, x2))
    assert np.allclose(A, A.T) and np.all(np.linalg.eigvalsh(A) > 0) and c > 0


@given(st.floats(-2.9, 2.9), st.floats(0.05, 0.95))
def test_coefficients_continuous(x1, u):
    def at(a, b):
        zt = SURF.zeta(a)
        return perturb.coeffs_ap_cp(SURF, (a, zt + b * (SURF.H0 - zt)))
    A0, c0 = at(x1, u)
    A1, c1 = at(x1 + 1e-7, u + 1e-7)
    assert np.max(np.abs(A1 - A0)) < 1e-4 and abs(c1 - c0) < 1e-4


def test_determinant_on_surface():
    for x1 in np.linspace(-2.5, 2.5, 11):
        zt = SURF.zeta(x1)
        _, c = perturb.coeffs_ap_cp(SURF, (x1, zt))
        assert c == pytest.approx(1 - 3 * SURF.p_value(x1) / (SURF.H0 - zt), rel=1e-12)


def test_degeneracy_reported():
    thr = perturb.amplitude_threshold("flat-bumps", "bump")
    assert 0.2 < thr < 0.35
    s = perturb.preset_surface("flat-bumps", "bump", 1.05 * thr)
    with pytest.raises(DegeneracyError) as exc:
        for x1 in np.linspace(-0.2, 0.2, 21):
            perturb.coeffs_ap_cp(s, (x1, s.zeta(x1)))
    assert exc.value.point is not None
    assert perturb.amplitude_threshold("flat-bumps", "dent") == math.inf


def test_injectivity_audit_positive():
    for pert in perturb.P_PRESETS:
        assert perturb.injectivity_audit(perturb.preset_surface("sinusoid", pert, 0.1), 31, 31) > 0


def test_small_amplitude_is_near_identity():
    s = perturb.preset_surface("two-tone", "double", 1e-6)
    A, c = perturb.coeffs_ap_cp(s, (0.7, s.zeta(0.7) + 0.1))
    assert np.max(np.abs(A - np.eye(2))) < 1e-4 and abs(c - 1) < 1e-4


def test_domain_and_parameter_errors():
    with pytest.raises(DomainError):
        perturb.phi_p(SURF, (0.0, SURF.zeta(0.0) - 0.1))
    with pytest.raises(ParameterError):
        perturb.coeffs_ap_cp(SURF, (0.0, SURF.H))
    with pytest.raises(ParameterError):
        perturb.preset_surface("flat-bumps", "bump", 2.0)
    with pytest.raises(ParameterError):
        perturb.preset_surface("nope")
    with pytest.raises(ParameterError):
        perturb.SurfaceModel(lambda x: 0.5 + 0.1 * math.sin(x / 2), lambda x: 0.0, 1.0, 1.5, 2.0)


def test_surface_from_csv(tmp_path):
    x = np.linspace(-math.pi, math.pi, 201)
    zeta = 0.6 + 0.2 * np.sin(x)
    p = 0.05 * np.exp(-x ** 2)
    path = tmp_path / "surf.csv"
    np.savetxt(path, np.column_stack([x, zeta, p]), delimiter=",", header="x1,zeta,p")
    s = perturb.surface_from_csv(path, 3.0, 1.5, 2.0)
    assert s.zeta(1.0) == pytest.approx(0.6 + 0.2 * math.sin(1.0), abs=1e-6)
    assert s.zeta(1.0 + 2 * math.pi) == pytest.approx(s.zeta(1.0), abs=1e-12)
    assert s.p_value(0.3) == pytest.approx(0.05 * math.exp(-0.09), abs=1e-6)
    assert s.p_value(3.0) == 0.0
