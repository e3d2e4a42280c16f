import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from radcond import specfun
from radcond.errors import DomainError

# mpmath, 30 digits: C(t) = sqrt(pi/2) fresnelc(t sqrt(2/pi)) and likewise S
FRESNEL_FROZEN = {
    0.5: (0.49688402921479471, 0.041481024268547482),
    1.0: (0.90452423790027208, 0.3102683017233811),
    3.0: (0.70286355773026873, 0.77356252689376902),
    4.5: (0.73550262182717537, 0.60517428912671526),
    7.0: (0.55833433186097142, 0.60588693162782711),
}

# mpmath.hankel1
HANKEL_FROZEN = [
    (0, 0.3, 0.97762624653829609 - 0.80727357780451949j),
    (0, 2.5, -0.048383776468197996 + 0.49807035961523189j),
    (1, 7.0, -0.0046828234823458327 - 0.30266723702418487j),
    (0, 15.0, -0.014224472826780773 + 0.20546429603891826j),
    (1, 40.0, 0.126038318037585 - 0.0057935058215496329j),
    (0, 1000.0, 0.024786686152420175 + 0.0047159179776228134j),
]


@pytest.mark.parametrize("t", sorted(FRESNEL_FROZEN))
def test_fresnel_frozen(t):
    c, s = FRESNEL_FROZEN[t]
    f = specfun.fresnel(t)
    assert abs(f.c - c) < 1e-12 and abs(f.s - s) < 1e-12


@given(st.floats(0.0, 30.0))
def test_fresnel_odd(t):
    a, b = specfun.fresnel(t), specfun.fresnel(-t)
    assert a.c == -b.c and a.s == -b.s


@given(st.floats(20.0, 500.0))
def test_fresnel_matches_two_term_tail(t):
    f = specfun.fresnel(t)
    c, s = specfun.fresnel_asymptotic(t)
    # next term is O(t^-5)
    assert abs(f.c - c) < 2 / t ** 5 and abs(f.s - s) < 2 / t ** 5


def test_fresnel_continuous_across_switch():
    t = specfun.FRESNEL_SWITCH
    lo, hi = specfun.fresnel(t), specfun.fresnel(math.nextafter(t, 10))
    assert abs(lo.c - hi.c) < 1e-13 and abs(lo.s - hi.s) < 1e-13


def test_fresnel_limit():
    f = specfun.fresnel(1e6)
    assert abs(f.c - specfun.FRESNEL_LIMIT) < 1e-6 and abs(f.s - specfun.FRESNEL_LIMIT) < 1e-6


def test_fresnel_rejects_nonfinite():
    with pytest.raises(DomainError):
        specfun.fresnel(math.inf)


@given(st.floats(0.01, 40.0))
def test_gamma_matches_stdlib(x):
    assert specfun.gamma(x) == pytest.approx(math.gamma(x), rel=1e-13)


@given(st.floats(-5.0, -0.01).filter(lambda x: abs(x - round(x)) > 1e-3))
def test_gamma_reflection(x):
    assert specfun.gamma(x) == pytest.approx(math.gamma(x), rel=1e-11)


def test_gamma_pole():
    with pytest.raises(DomainError):
        specfun.gamma(-2.0)


@pytest.mark.parametrize("m,n,half", [(0, 2, False), (1, 3, False), (0, 2, True), (1, 2, True), (3, 5, True)])
def test_generalized_fresnel_closed_form(m, n, half):
    p = m - 0.5 if half else m
    q = mpmath.mpf(p + 1) / n
    ref = complex(mpmath.gamma(q) / n * mpmath.expj(mpmath.pi * q / 2))
    assert abs(specfun.generalized_fresnel(m, n, half) - ref) < 1e-13


def test_generalized_fresnel_is_fresnel_limit():
    v = specfun.generalized_fresnel(0, 2)
    assert abs(v - specfun.FRESNEL_LIMIT * (1 + 1j)) < 1e-14


def test_generalized_fresnel_domain():
    with pytest.raises(DomainError):
        specfun.generalized_fresnel(0, 0)


@pytest.mark.parametrize("order,t,ref", HANKEL_FROZEN)
def test_hankel_frozen(order, t, ref):
    v = specfun.hankel1(order, t).value
    assert abs(v - ref) <= 1e-12 * abs(ref)


@given(st.floats(0.05, 1e4))
def test_wronskian(t):
    h0, h1 = specfun.hankel1(0, t).value, specfun.hankel1(1, t).value
    w = h1.real * h0.imag - h0.real * h1.imag
    assert abs(w - 2 / (math.pi * t)) < 1e-11 * max(1.0, 2 / (math.pi * t))


@given(st.floats(0.5, 200.0), st.sampled_from([0, 1]))
def test_hankel_derivative_fd(t, order):
    h = 1e-5 * max(1.0, t)
    fd = (specfun.hankel1(order, t + h).value - specfun.hankel1(order, t - h).value) / (2 * h)
    assert abs(specfun.hankel1_derivative(order, t) - fd) < 1e-7 * max(1.0, abs(fd))


def test_hankel_array_matches_scalar_and_bins():
    t = np.geomspace(0.1, 1e6, 300)
    arr = specfun.hankel1_array(0, t)
    assert all(arr[i] == specfun.hankel1(0, t[i]).value for i in range(0, 300, 37))
    # leading term takes over for large t
    big = t > 1e4
    rel = np.abs(arr[big] - specfun.hankel_leading(0, t[big])) / np.abs(arr[big])
    assert np.all(rel < 1e-4)


def test_hankel_continuous_at_switch():
    t = specfun.BESSEL_SWITCH
    for order in (0, 1):
        a = specfun.hankel1(order, t).value
        b = specfun.hankel1(order, math.nextafter(t, 100)).value
        assert abs(a - b) < 1e-12


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan])
def test_hankel_domain(bad):
    with pytest.raises(DomainError):
        specfun.hankel1(0, bad)
    with pytest.raises(DomainError):
        specfun.hankel1_array(2, 1.0)
