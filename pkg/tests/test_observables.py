import math
import warnings

import mpmath
import pytest
from hypothesis import given, strategies as st

from udwent import observables as O
from udwent.errors import DomainError, GuardError
from udwent.kernels import ScenarioSpec
from udwent.observables import (DetectorParams, closed_form_A0, closed_form_X0, exchange_amplitude,
                                negativity, observe, response_probability)
from udwent.quadrature import QuadratureSpec
from udwent.scaled import ScaledComplex

mpmath.mp.dps = 40


def mp_A0(w):
    w = mpmath.mpf(w)
    return float((mpmath.exp(-w * w) - mpmath.sqrt(mpmath.pi) * w * mpmath.erfc(w)) / (4 * mpmath.pi))


def mp_X0(w, L):
    w, L = mpmath.mpf(w), mpmath.mpf(L)
    return float(-mpmath.exp(-L * L / 4 - w * w) * mpmath.erfi(L / 2) / (4 * L * mpmath.sqrt(mpmath.pi)))


def P(w):
    return DetectorParams(1.0, w)


def combined(a, b):
    return abs(a.value.ratio(b.value) - 1), a.rel_error + b.rel_error


def test_A0_examples():
    assert closed_form_A0(P(0)).to_complex().real == pytest.approx(1 / (4 * math.pi), rel=1e-15)
    # the closed form at sigma*Omega = 1 is 0.00708827 (the often-quoted 0.0070894 is off in the 4th digit)
    assert closed_form_A0(P(1)).to_complex().real == pytest.approx(mp_A0(1), rel=1e-14)
    assert closed_form_A0(P(1)).to_complex().real == pytest.approx(0.0070883, abs=5e-8)


@pytest.mark.parametrize("w", [0.0, 0.2, 1.0, 3.0, 10.0, 26.0])
def test_A0_against_mpmath(w):
    assert closed_form_A0(P(w)).to_complex().real == pytest.approx(mp_A0(w), rel=1e-13)


def test_A0_large_frequency_scaled():
    for w in (1e2, 1e4, 1e6):
        a = closed_form_A0(P(w))
        hat = a.mantissa_at(round(-w * w)).real * math.exp(w * w - round(w * w))
        assert hat == pytest.approx(1 / (8 * math.pi * w * w), rel=2 / w**2)
    hats = [closed_form_A0(P(w)).log_abs() + w * w for w in (10.0, 20.0, 40.0)]
    assert hats[0] > hats[1] > hats[2]


def test_X0_examples():
    x = closed_form_X0(P(0), 2.0).to_complex()
    assert x.real == pytest.approx(-0.042819, abs=5e-7)
    assert x.real == pytest.approx(mp_X0(0, 2.0), rel=1e-13)
    L = 500.0
    assert closed_form_X0(P(0), L).to_complex().real == pytest.approx(-1 / (2 * math.pi * L * L), rel=1e-5)
    with pytest.raises(DomainError):
        closed_form_X0(P(0), 0.0)


@given(st.floats(0, 50), st.floats(0.1, 1e4))
def test_X0_real_nonpositive(w, L):
    x = closed_form_X0(P(w), L)
    assert x.mantissa.imag == 0 and x.mantissa.real <= 0


@given(st.floats(0, 8), st.floats(0.5, 60))
def test_X0_against_mpmath(w, L):
    assert closed_form_X0(P(w), L).to_complex().real == pytest.approx(mp_X0(w, L), rel=1e-12, abs=1e-300)


def test_negativity_examples():
    assert negativity(0.001, -0.001).is_zero()
    assert negativity(0.001, -0.003).to_complex().real == pytest.approx(0.002)
    r = observe(ScenarioSpec.vacuum(), P(10.0), 10.0)
    assert r.entangled and r.N.mantissa.real > 0
    with pytest.raises(DomainError):
        negativity(-1.0, 0.0)


@given(st.floats(0, 1e3), st.floats(0.1, 1e3))
def test_negativity_definition(w, L):
    r = observe(ScenarioSpec.vacuum(), P(w), L)
    d = abs(r.X) - r.A
    if d.mantissa.real > 0:
        assert r.N.isclose(d, rel_tol=1e-15)
    else:
        assert r.N.is_zero()
    assert r.A.mantissa.real >= 0 and r.error_estimate >= 0 and r.method


def test_eta0_does_not_change_classification():
    for eta in (1e-3, 0.5):
        r = observe(ScenarioSpec.vacuum(), DetectorParams(1.0, 10.0, eta), 10.0)
        assert r.entangled
        a = response_probability(ScenarioSpec.vacuum(), DetectorParams(1.0, 2.0, eta))
        assert a.absolute(eta).ratio(a.value) == pytest.approx(eta**2)


def test_sigma_covariance():
    # Omega scales as 1/sigma and L as sigma; A and X are dimensionless
    a = observe(ScenarioSpec.thermal(1e-2), DetectorParams(1.0, 3.0), 40.0)
    b = observe(ScenarioSpec.thermal(1e-2 / 2.5), DetectorParams(2.5, 3.0 / 2.5), 100.0)
    assert a.A.isclose(b.A, rel_tol=1e-12) and a.X.isclose(b.X, rel_tol=1e-12)


def test_vacuum_routes_are_closed_form():
    r = response_probability(ScenarioSpec.vacuum(), P(1.0))
    assert r.method == "closed_form" and r.value == closed_form_A0(P(1.0))
    x = exchange_amplitude(ScenarioSpec.vacuum(), P(0.0), 2.0)
    assert x.method == "closed_form" and x.value == closed_form_X0(P(0.0), 2.0)


def test_vacuum_quadrature_reproduces_closed_forms():
    x = exchange_amplitude(ScenarioSpec.vacuum(), P(0.0), 2.0, method="quadrature")
    assert x.value.to_complex().real == pytest.approx(-0.042819, abs=5e-7)
    a = response_probability(ScenarioSpec.vacuum(), P(1.0), method="quadrature")
    assert a.value.ratio(closed_form_A0(P(1.0))).real == pytest.approx(1, abs=1e-9)


def test_imaginary_part_warning(monkeypatch):
    noisy = ScaledComplex.from_value(1.0 + 0.01j)
    with pytest.warns(RuntimeWarning):
        assert O._real_part(noisy).to_complex() == 1.0
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        O._real_part(ScaledComplex.from_value(1.0 + 1e-6j))


def test_guards_on_observables():
    with pytest.raises(GuardError):
        response_probability(ScenarioSpec.thermal(0.5), P(1.0))
    with pytest.raises(GuardError):
        exchange_amplitude(ScenarioSpec.thermal(1e-3), P(1.0), 5.0)


@pytest.mark.parametrize("w", [0.0, 0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("tpt", [1e-4, 1e-3, 1e-2])
def test_thermal_A_exceeds_vacuum(w, tpt):
    a = response_probability(ScenarioSpec.thermal(tpt), P(w))
    assert a.value > closed_form_A0(P(w))


@pytest.mark.parametrize("L", [10.0, 30.0, 300.0])
@pytest.mark.parametrize("w", [0.0, 1.0, 40.0])
def test_thermal_X_real_negative(L, w):
    for method in ("series", "image_sum", "quadrature"):
        x = exchange_amplitude(ScenarioSpec.thermal(1e-2), P(w), L, method=method).value
        assert x.mantissa.real < 0
        assert abs(x.mantissa.imag) <= 1e-8 * abs(x.mantissa)


def test_desitter_A_equals_thermal_A():
    for w in (0.5, 3.0):
        a = response_probability(ScenarioSpec.desitter(1e-3), P(w))
        b = response_probability(ScenarioSpec.thermal(1e-3), P(w))
        assert a.value == b.value


def test_three_way_A_consistency():
    sc = ScenarioSpec.thermal(1e-2)
    ests = [response_probability(sc, P(1.0), method=m) for m in ("series", "quadrature", "image_sum")]
    for i in range(3):
        for j in range(i + 1, 3):
            diff, tol = combined(ests[i], ests[j])
            assert diff <= tol


def test_desitter_series_vs_quadrature():
    sc = ScenarioSpec.desitter(1e-2)
    s = exchange_amplitude(sc, P(1.0), 20.0, method="series")
    q = exchange_amplitude(sc, P(1.0), 20.0, method="quadrature")
    diff, tol = combined(s, q)
    assert diff <= tol


def test_leading_thermal_correction():
    for w in (0.0, 1.0, 2.0):
        T = 1e-3 / (2 * math.pi)
        d = response_probability(ScenarioSpec.thermal(1e-3), P(w)).value - closed_form_A0(P(w))
        lead = ScaledComplex.from_log(-w * w, math.pi * T * T / 6)
        assert d.ratio(lead).real == pytest.approx(1.0, abs=0.05)


def test_X_converges_to_vacuum_as_T_squared():
    # deviation of the thermal X from X0 shrinks quadratically in T
    L, w = 50.0, 0.2
    x0 = closed_form_X0(P(w), L)
    devs = [abs(exchange_amplitude(ScenarioSpec.thermal(t), P(w), L).value.ratio(x0) - 1)
            for t in (1e-2, 1e-3, 1e-4)]
    assert devs[0] / devs[1] == pytest.approx(100, rel=0.05)
    assert devs[1] / devs[2] == pytest.approx(100, rel=0.05)
    ds = [abs(exchange_amplitude(ScenarioSpec.desitter(t), P(w), L).value.ratio(x0) - 1)
          for t in (1e-2, 1e-3, 1e-4)]
    assert ds[0] > ds[1] > ds[2]
