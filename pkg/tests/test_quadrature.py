import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from udwent import kernels as K
from udwent.errors import AccuracyError
from udwent.quadrature import (QuadratureSpec, adaptive, epsilon_extrapolate, gaussian_moment,
                               half_gaussian_moment, integrate_adaptive, u_moment)

SQRT_PI = math.sqrt(math.pi)


def brute_moment(n, omega):
    f = lambda v: v**n * mpmath.exp(-v * v / 4) * mpmath.exp(-1j * omega * v)
    return complex(mpmath.quad(f, [-mpmath.inf, 0, mpmath.inf]))


def hermite_moment(n, omega):
    # G_n = i^n d^n/dW^n [2 sqrt(pi) e^{-W^2}] = 2 sqrt(pi) (-i)^n H_n(W) e^{-W^2}
    with mpmath.workdps(40):
        return complex(2 * mpmath.sqrt(mpmath.pi) * (-1j) ** n * mpmath.hermite(n, omega)
                       * mpmath.exp(-mpmath.mpf(omega) ** 2))


def test_moment_examples():
    w = 0.7
    assert gaussian_moment(0, 1.0, w).to_complex() == pytest.approx(2 * SQRT_PI * math.exp(-w * w), rel=1e-15)
    assert gaussian_moment(1, 1.0, 0.0).to_complex() == 0
    g1 = gaussian_moment(1, 1.0, w).to_complex()
    assert g1 == pytest.approx(-4j * SQRT_PI * w * math.exp(-w * w), rel=1e-14)
    assert g1 == pytest.approx(brute_moment(1, w), rel=1e-12)


@pytest.mark.parametrize("n", range(9))
@pytest.mark.parametrize("omega", [0.0, 0.3, 1.0, 2.5, 5.0])
def test_moments_against_oracles(n, omega):
    got = gaussian_moment(n, 1.0, omega).to_complex()
    ref = hermite_moment(n, omega)
    assert abs(got - ref) <= 1e-12 * abs(ref) + 1e-300
    if omega <= 2.5:
        assert abs(got - brute_moment(n, omega)) <= 1e-9 * max(abs(ref), 1e-3)


def test_u_moment_is_conjugate_phase():
    assert u_moment(3, 1.0, 0.8).to_complex() == pytest.approx(gaussian_moment(3, 1.0, -0.8).to_complex())


def test_half_moments():
    assert half_gaussian_moment(0) == pytest.approx(SQRT_PI)
    assert half_gaussian_moment(1) == pytest.approx(2.0)
    assert half_gaussian_moment(2) == pytest.approx(2 * SQRT_PI)
    for n in range(6):
        ref = float(mpmath.quad(lambda v: v**n * mpmath.exp(-v * v / 4), [0, mpmath.inf]))
        assert half_gaussian_moment(n) == pytest.approx(ref, rel=1e-13)


def test_moments_survive_large_frequency():
    g = gaussian_moment(2, 1.0, 1e3)
    assert g.to_complex() == 0
    assert g.log_abs() == pytest.approx(-1e6 + math.log(2 * SQRT_PI * abs(2 - 4e6)), rel=1e-12)


@given(st.floats(0, 5))
def test_calibration_constant_kernel(omega):
    r = integrate_adaptive(lambda x: np.ones_like(x), "full", "minus", QuadratureSpec(), omega=omega)
    assert r.value.isclose(gaussian_moment(0, 1.0, omega), rel_tol=1e-9)
    assert r.rel_error <= 1e-9


def test_adaptive_polynomial_exact():
    val, err, n = adaptive(lambda x: x**5 - 3 * x**2, 0.0, 2.0, 1e-12)
    assert val == pytest.approx(64 / 6 - 8, rel=1e-14)
    assert n == 1


def test_adaptive_budget():
    with pytest.raises(AccuracyError) as err:
        adaptive(lambda x: np.sin(1.0 / (x + 1e-9)), 0.0, 1.0, 1e-14, max_panels=20)
    assert err.value.value is not None


def test_principal_value_half_line():
    # PV int_0^inf e^{-v^2/4}/(v - 3) dv + i pi e^{-9/4}
    c = 3.0
    r = integrate_adaptive(lambda v: np.ones_like(v), "half", pole=c, spec=QuadratureSpec(rel_tol_1d=1e-12))
    f = lambda v: (mpmath.exp(-v * v / 4) - mpmath.exp(-c * c / 4)) / (v - c)
    pv = mpmath.quad(f, [0, c, 12]) + mpmath.exp(-c * c / 4) * mpmath.log((12 - c) / c)
    ref = complex(pv) + 1j * math.pi * math.exp(-c * c / 4)
    assert r.value.to_complex() == pytest.approx(ref, rel=1e-10)


def test_epsilon_extrapolation_thermal():
    T, L = 1e-2 / (2 * math.pi), 50.0
    spec = QuadratureSpec(rel_tol_1d=1e-12)

    def at(eps):
        def k(v):
            return np.array([K.thermal_wightman(K.KernelInput(v=float(x), epsilon=eps, L=L, T=T)) for x in v])
        return integrate_adaptive(k, "half", spec=spec).value.to_complex()

    best, err = epsilon_extrapolate(at, spec.eps_schedule)
    assert err <= 1e-8 * abs(best)
    assert best == pytest.approx(at(0.0), rel=1e-8)


def test_deterministic():
    f = lambda x: np.exp(-x * x / 4) * np.cos(3 * x) / (1 + x * x)
    a = adaptive(f, -12, 12, 1e-11)
    b = adaptive(f, -12, 12, 1e-11)
    assert a == b


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(window_cut=6)
    with pytest.raises(ValueError):
        QuadratureSpec(series_order=3)
    with pytest.raises(ValueError):
        QuadratureSpec(method="magic")
