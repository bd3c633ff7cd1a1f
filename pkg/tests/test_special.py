import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from udwent.errors import DomainError, SingularityError
from udwent.special import (DEFICIT_SWITCH, LAURENT_RADIUS, csch_coth, dawson, erf_family, erfcx, erfcx_deficit,
                            faddeeva, xcoth)

mpmath.mp.dps = 40
reals = st.floats(-25, 25, allow_nan=False)


def mp_dawson(x):
    x = mpmath.mpf(x)
    return float(mpmath.sqrt(mpmath.pi) / 2 * mpmath.exp(-x * x) * mpmath.erfi(x))


def test_identity_at_zero():
    f = erf_family(0.0)
    assert (f.erf, f.erfc, f.erfcx, f.erfi, f.dawson) == (0.0, 1.0, 1.0, 0.0, 0.0)


def test_values_at_one():
    f = erf_family(1.0)
    assert f.erfc == pytest.approx(0.1572992, abs=5e-8)
    assert f.erfi == pytest.approx(1.6504258, abs=5e-8)
    assert f.dawson == pytest.approx(0.5380795, abs=5e-8)


def test_asymptotic_values_at_ten():
    assert erfcx(10.0) == pytest.approx(0.0561410, abs=5e-8)
    # the quoted 0.0502539 is rounded up from 0.05025385 (mpmath)
    assert dawson(10.0) == pytest.approx(0.0502539, abs=1e-7)
    assert dawson(10.0) == pytest.approx(mp_dawson(10.0), rel=1e-14)
    assert erfcx(10.0) == pytest.approx(1 / (10 * math.sqrt(math.pi)), rel=6e-3)
    assert dawson(10.0) == pytest.approx(1 / 20, rel=6e-3)


@pytest.mark.parametrize("x", [-30.0, -3.2, -0.4, 0.1, 1.7, 4.0, 11.0, 60.0, 500.0])
def test_against_mpmath(x):
    f = erf_family(x)
    X = mpmath.mpf(x)
    assert f.erfc == pytest.approx(float(mpmath.erfc(X)), rel=1e-13, abs=1e-300)
    assert f.erfcx == pytest.approx(float(mpmath.exp(X * X) * mpmath.erfc(X)), rel=1e-13)
    assert f.dawson == pytest.approx(mp_dawson(x), rel=1e-13)


def test_nonfinite_rejected():
    for bad in (math.nan, math.inf):
        with pytest.raises(DomainError):
            erf_family(bad)
        with pytest.raises(DomainError):
            dawson(bad)


@given(reals)
def test_odd_symmetry(x):
    a, b = erf_family(x), erf_family(-x)
    assert a.erf == -b.erf
    assert a.dawson == -b.dawson


@given(reals)
def test_erf_plus_erfc(x):
    f = erf_family(x)
    assert f.erf + f.erfc == pytest.approx(1.0, abs=1e-15)


@given(st.floats(-5, 5))
def test_erfi_dawson_identity(x):
    f = erf_family(x)
    assert f.erfi * math.exp(-x * x) == pytest.approx(2 / math.sqrt(math.pi) * f.dawson, rel=1e-13, abs=1e-300)


def test_faddeeva_examples():
    assert faddeeva(0) == 1
    assert faddeeva(1j) == pytest.approx(math.e * math.erfc(1), rel=1e-14)
    assert faddeeva(1j).real == pytest.approx(0.4275836, abs=5e-8)
    big = faddeeva(1e4j)
    assert big.real == pytest.approx(1 / (math.sqrt(math.pi) * 1e4), rel=1e-4)


def test_faddeeva_lower_half_plane_rejected():
    with pytest.raises(DomainError):
        faddeeva(1 - 0.1j)


@given(st.floats(-30, 30), st.floats(0, 30))
def test_faddeeva_against_mpmath(x, y):
    z = complex(x, y)
    ref = complex(mpmath.exp(-mpmath.mpc(z) ** 2) * mpmath.erfc(-1j * mpmath.mpc(z)))
    assert abs(faddeeva(z) - ref) <= 1e-12 * abs(ref)


@given(st.floats(0, 1e4))
def test_erfcx_deficit_against_mpmath(x):
    X = mpmath.mpf(x)
    ref = float(1 - mpmath.sqrt(mpmath.pi) * X * mpmath.exp(X * X) * mpmath.erfc(X))
    assert erfcx_deficit(x) == pytest.approx(ref, rel=1e-11)


def test_erfcx_deficit_continuous_at_switch():
    lo, hi = erfcx_deficit(DEFICIT_SWITCH * (1 - 1e-13)), erfcx_deficit(DEFICIT_SWITCH * (1 + 1e-13))
    assert abs(lo - hi) < 1e-11 * lo


def test_erfcx_deficit_domain_and_asymptote():
    assert erfcx_deficit(0.0) == 1.0
    assert erfcx_deficit(1e5) == pytest.approx(1 / (2e10), rel=1e-9)
    with pytest.raises(DomainError):
        erfcx_deficit(-1.0)


def test_csch_coth_examples():
    c = csch_coth(1j * math.pi / 2)
    assert abs(c.csch + 1j) < 1e-15
    assert abs(c.coth) < 1e-15
    c = csch_coth(1e-6)
    assert c.csch.real == pytest.approx(1e6 - 1e-6 / 6, rel=1e-15)
    assert c.coth.real == pytest.approx(1e6 + 1e-6 / 3, rel=1e-15)
    with pytest.raises(SingularityError) as err:
        csch_coth(1j * math.pi)
    assert err.value.pole == 1


@pytest.mark.parametrize("boundary", [LAURENT_RADIUS, 20.0])
def test_csch_coth_continuous_across_branches(boundary):
    for phase in (1.0, 1j ** 0.3, -1.0):
        z = boundary * phase
        lo, hi = csch_coth(z * (1 - 1e-12)), csch_coth(z * (1 + 1e-12))
        for a, b in zip(lo, hi):
            assert abs(a - b) <= 1e-10 * abs(a) + 1e-300


@given(st.floats(-40, 40), st.floats(-3.0, 3.0))
def test_csch_squared_against_mpmath(x, y):
    z = complex(x, y)
    if abs(z - 1j * math.pi * round(y / math.pi)) < 1e-3:
        return
    ref = complex(mpmath.csch(mpmath.mpc(z)) ** 2)
    got = csch_coth(z).csch ** 2
    assert abs(got - ref) <= 1e-12 * abs(ref) + 1e-300
    ref = complex(mpmath.coth(mpmath.mpc(z)))
    assert abs(csch_coth(z).coth - ref) <= 1e-12 * abs(ref)


def test_array_input():
    z = np.array([0.1, 1.0, 30.0]) + 0.2j
    c = csch_coth(z)
    assert c.csch.shape == (3,)
    assert np.allclose(c.coth, [complex(mpmath.coth(complex(w))) for w in z], rtol=1e-13)


def test_xcoth_regular_at_origin():
    assert xcoth(0.0) == 1
    assert xcoth(1e-8).real == pytest.approx(1.0, abs=1e-15)
