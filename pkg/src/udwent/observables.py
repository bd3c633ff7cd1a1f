"""Excitation probability A, exchange amplitude X and negativity N.

Everything is reported in units of ``eta0**2``; internally sigma = 1.  Values
are :class:`~udwent.scaled.ScaledComplex` because each carries a factor
``exp(-sigma**2 Omega**2)``.

Routes
------
closed_form  vacuum A0 and X0.
series       small-T asymptotic series (Taylor expansion about u = y = 0,
             integrated term by term).
quadrature   adaptive quadrature on contours shifted by 2i*Omega.
image_sum    thermal correlators as sums over imaginary-time images, each
             term a Faddeeva / erfcx evaluation; Hurwitz-zeta tails.
auto         series, falling back to image_sum (thermal) or quadrature
             (de Sitter X) where the series reports breakdown.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from scipy.special import zeta as hurwitz

from .errors import (AsymptoticBreakdownError, DomainError, GuardError, PoleCrossingError)
from .kernels import (FOUR_PI2, ScenarioSpec, _delta_response, _desitter, _response,
                      _sinh_over, _thermal, _vacuum, check_guards)
from .quadrature import QuadratureSpec, integrate_adaptive
from .scaled import ScaledComplex
from .series import response_delta_series, series_expand, series_integrate
from .special import SQRT_PI, dawson, erfcx_deficit, faddeeva, xcoth

ROUNDOFF = 1e-14
IMAGE_TERMS = 64


@dataclass(frozen=True)
class DetectorParams:
    sigma: float = 1.0
    omega: float = 0.0
    eta0: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError("sigma must be > 0")
        if not self.omega >= 0:
            raise DomainError("omega must be >= 0")
        if not self.eta0 > 0:
            raise DomainError("eta0 must be > 0")

    @property
    def sigma_omega(self) -> float:
        return self.sigma * self.omega


@dataclass(frozen=True)
class Estimate:
    """A computed quantity with its relative error estimate and route."""

    value: ScaledComplex
    rel_error: float
    method: str

    def absolute(self, eta0: float = 1.0) -> ScaledComplex:
        return self.value * eta0**2


@dataclass(frozen=True)
class ObservableResult:
    A: ScaledComplex
    X: ScaledComplex
    N: ScaledComplex
    method: str
    error_estimate: float
    A_error: float = 0.0
    X_error: float = 0.0

    @property
    def entangled(self) -> bool:
        return not self.N.is_zero()

    @property
    def margin(self) -> float:
        """(|X| - A) / A."""
        return abs(self.X).ratio(self.A).real - 1.0


def _reduced(scenario: ScenarioSpec, params: DetectorParams, L=None):
    s = params.sigma
    red = scenario if scenario.kind == "vacuum" else ScenarioSpec(scenario.kind, scenario.T * s)
    return red, params.sigma_omega, (None if L is None else L / s)


# -------------------------------------------------------------------------
# closed forms

def _A0(x: float) -> ScaledComplex:
    return ScaledComplex.from_log(-x * x, erfcx_deficit(x) / (4.0 * math.pi))


def _X0(x: float, L: float) -> ScaledComplex:
    return ScaledComplex.from_log(-x * x, -dawson(L / 2.0) / (2.0 * math.pi * L))


def closed_form_A0(params: DetectorParams) -> ScaledComplex:
    """Vacuum excitation probability ``[exp(-s^2 W^2) - sqrt(pi) s W erfc(s W)] / 4 pi``."""
    return _A0(params.sigma_omega)


def closed_form_X0(params: DetectorParams, L: float) -> ScaledComplex:
    """Vacuum exchange amplitude, via ``exp(-w^2) erfi(w) = (2/sqrt(pi)) dawson(w)``."""
    if not L > 0:
        raise DomainError("L must be > 0")
    return _X0(params.sigma_omega, L / params.sigma)


# -------------------------------------------------------------------------
# excitation probability

def _contour_shift(x: float) -> float:
    return 2.0 * x if x >= 0.5 else 1.0


IMAG_TOLERANCE = 1e-3


def _real_part(val: ScaledComplex) -> ScaledComplex:
    """Drop the (rounding-level) imaginary part of a probability, loudly if it is not small."""
    if not val.is_zero() and abs(val.imag.ratio(val)) > IMAG_TOLERANCE:
        warnings.warn(f"discarding imaginary part {abs(val.imag.ratio(val)):.2e} of A", RuntimeWarning,
                      stacklevel=3)
    return val.real


def _A0_quadrature(x: float, spec: QuadratureSpec) -> tuple[ScaledComplex, float]:
    r = integrate_adaptive(lambda y: -1.0 / (FOUR_PI2 * y * y), "full", "minus", spec,
                           omega=x, shift=_contour_shift(x))
    return _real_part(r.value * SQRT_PI), r.rel_error


def _dA_series(T, x, spec):
    v, e = series_integrate(response_delta_series(T, spec), "A", 1.0, x)
    return v.real, e


def _dA_quadrature(T, x, spec):
    if 2.0 * x * T >= 1.0:
        raise PoleCrossingError("contour shift 2i*Omega would cross the first thermal image")
    r = integrate_adaptive(lambda y: _delta_response(y, T), "full", "minus", spec, omega=x)
    val = r.value * SQRT_PI
    return _real_part(val), r.rel_error


def _dA_image_sum(T, x):
    """Thermal images k != 0 of the response function, integrated exactly.

    Image k contributes ``exp(-x^2) r(|y_k|) / (4 pi)`` with
    ``y_k = x + k/(2T)`` and ``r = 1 - sqrt(pi) y erfcx(y)``; images with
    ``0 <= y_k < x`` add the absorption residue ``y_k exp(y_k^2 - x^2)/(2 sqrt(pi))``.
    """
    q = 2.0 * T * x
    K = IMAGE_TERMS + int(math.ceil(q))
    ks = np.array([k for k in range(-K, K + 1) if k != 0], dtype=float)
    y = x + ks / (2.0 * T)
    r = erfcx_deficit(np.abs(y))
    body = float(np.sum(r))
    # tail |k| > K from r(y) ~ sum_n (-1)^(n+1) (2n-1)!! / (2 y^2)^n
    tail = 0.0
    last = 0.0
    dfact = 1.0
    for n in range(1, 6):
        dfact *= 2 * n - 1
        zsum = hurwitz(2 * n, K + 1 + q) + hurwitz(2 * n, K + 1 - q)
        term = (-1) ** (n + 1) * dfact / 2.0**n * (2.0 * T) ** (2 * n) * zsum
        if n < 5:
            tail += term
        else:
            last = abs(term)
    main = ScaledComplex.from_log(-x * x, (body + tail) / (4.0 * math.pi))
    err = (last + ROUNDOFF * (body + abs(tail))) / (4.0 * math.pi)
    res = ScaledComplex()
    for yk in y[(y >= 0) & (y < x)]:
        res = res + ScaledComplex.from_log(yk * yk - x * x, yk / (2.0 * SQRT_PI))
    total = main + res
    rel = err * math.exp(min(0.0, -x * x - total.log_abs())) if not total.is_zero() else 0.0
    if not total.is_zero():
        rel = (ScaledComplex.from_log(-x * x, err) / total).to_complex().real
    return total, abs(rel) + ROUNDOFF


def _resolve(spec: QuadratureSpec, method: str | None) -> str:
    return method or spec.method


def response_probability(scenario: ScenarioSpec, params: DetectorParams,
                         spec: QuadratureSpec = QuadratureSpec(), method: str | None = None) -> Estimate:
    """Excitation probability of one detector (units of eta0**2).

    Thermal and de Sitter scenarios share the same worldline response, so both
    return ``A0 + Delta A``.
    """
    red, x, _ = _reduced(scenario, params)
    method = _resolve(spec, method)
    if red.kind == "vacuum":
        if method == "quadrature":
            v, e = _A0_quadrature(x, spec)
            return Estimate(v, e, "quadrature")
        return Estimate(_A0(x), ROUNDOFF, "closed_form")
    check_guards(red)
    T = red.T
    a0 = _A0(x)
    if method in ("auto", "series"):
        try:
            d, e = _dA_series(T, x, spec)
            used = "series"
        except AsymptoticBreakdownError:
            if method == "series":
                raise
            d, e = _dA_image_sum(T, x)
            used = "image_sum"
    elif method == "quadrature":
        d, e = _dA_quadrature(T, x, spec)
        used = "quadrature"
    elif method == "image_sum":
        d, e = _dA_image_sum(T, x)
        used = "image_sum"
    else:
        raise DomainError(f"method {method!r} not available for {red.kind} A")
    total = a0 + d
    rel = abs(d.ratio(total)) * e + ROUNDOFF
    return Estimate(total, rel, used)


# -------------------------------------------------------------------------
# exchange amplitude

def _u_factor(x: float, quadrature: bool, spec: QuadratureSpec) -> tuple[ScaledComplex, float]:
    """``int exp(-u^2/4) exp(i x u) du`` (= 2 sqrt(pi) exp(-x^2))."""
    if quadrature:
        r = integrate_adaptive(lambda u: np.ones_like(u), "full", "plus", spec, omega=x)
        return r.value, r.rel_error
    return ScaledComplex.from_log(-x * x, 2.0 * SQRT_PI), ROUNDOFF


@lru_cache(maxsize=4096)
def _half_line_thermal(L: float, T: float, spec: QuadratureSpec, vacuum: bool) -> tuple[complex, float]:
    """``int_0^inf exp(-v^2/4) D(v - i0) dv`` for the vacuum or thermal cross kernel."""
    cut = spec.window_cut
    a = math.pi * T
    if L < cut:
        if vacuum:
            def g(v):
                return -1.0 / (FOUR_PI2 * (v + L))
        else:
            def g(v):
                v = np.asarray(v, dtype=complex)
                c2 = _thermal_coth(a * (L + v))
                return (T / (8.0 * math.pi * L)) * (-xcoth(a * (L - v)) / a + (v - L) * c2)
        r = integrate_adaptive(g, "half", spec=spec, pole=L)
    else:
        if vacuum:
            def k(v):
                return _vacuum(v + 0j, L)
        else:
            def k(v):
                return _thermal(v, L, T)
        r = integrate_adaptive(k, "half", spec=spec)
    return r.value.to_complex(), r.rel_error


def _thermal_coth(z):
    from .special import csch_coth
    return csch_coth(z).coth


def _X_quadrature_factorized(L, T, x, spec, vacuum):
    h, e1 = _half_line_thermal(L, T, spec, vacuum)
    U, e2 = _u_factor(x, True, spec)
    return U * (-h), e1 + e2


@lru_cache(maxsize=4096)
def _thermal_image_sum_hat(L: float, T: float) -> tuple[complex, float]:
    """``X exp(x^2)`` for the thermal pair by the image expansion of coth."""
    a0 = complex(L)
    total = -2.0 * SQRT_PI * float(dawson(L / 2.0))
    ks = np.arange(1, IMAGE_TERMS + 1, dtype=float)
    ak = L - 1j * ks / T
    C = -1j * math.pi * faddeeva(-ak / 2.0)
    body = float(np.sum(2.0 * C.real))
    # tail: C(a) ~ -sum_m M_2m / a^(2m+1), M_2m = 2 sqrt(pi) (2m-1)!! 2^m
    tail = 0.0
    last = 0.0
    dfact = 1.0
    for m in range(0, 4):
        if m:
            dfact *= 2 * m - 1
        M2m = 2.0 * SQRT_PI * dfact * 2.0**m
        p = 2 * m + 1
        n0, b = IMAGE_TERMS + 1, L * T
        if p == 1:
            # sum_{k>K} 2 Re[iT/(k + ib)] = 2 L T^2 sum 1/(k^2 + b^2) = 2 L T^2 Im psi(n0 + ib) / b
            pair = 2.0 * L * T * T * float(mpmath.im(mpmath.digamma(n0 + 1j * b))) / b
        else:
            pair = 2.0 * complex((1j * T) ** p * mpmath.zeta(p, n0 + 1j * b)).real
        term = -M2m * pair
        if m < 3:
            tail += term
        else:
            last = abs(term)
    s = total + body + tail
    pref = 1.0 / (4.0 * math.pi**1.5 * L)
    light_cone = 1j * math.exp(-L * L / 4.0) / (4.0 * SQRT_PI * L)
    value = pref * s + light_cone
    rel = (pref * (last + ROUNDOFF * (abs(total) + abs(body) + abs(tail)))) / abs(value) + ROUNDOFF
    return value, rel


POLE_CLEARANCE = 0.05


def _desitter_window_ok(L, T, cut, x=0.0):
    """Is the light-cone pole clear of the real v-segment once u sits at Im u = 2x?"""
    kappa = 2.0 * math.pi * T
    if L * math.exp(-kappa * cut / 2.0) >= cut + 4.0:
        return True
    s = np.linspace(-cut, cut, 241)
    vp = np.arcsinh(kappa * L * np.exp(kappa * (s + 2j * x) / 2.0) / 2.0) * (2.0 / kappa)
    re = np.clip(vp.real, 0.0, cut)
    d = np.abs(vp - re)
    return bool(d.min() >= POLE_CLEARANCE)


def _desitter_crossing_check(L, T, x, cut):
    # shifting u by 2i*x sweeps the poles at Im u = k/T, 0 < k/T < 2x; each residue
    # carries exp((x - k/2T)^2 - a^2/4) relative to exp(-x^2), a = Re u at the pole
    kmax = math.ceil(2.0 * x * T) - 1
    if kmax < 1:
        return
    S = abs(complex(_sinh_over(np.array([cut]), T)[0])) ** 2
    a = math.log(S / (L * L)) / (2.0 * math.pi * T)
    worst = max((x - 1 / (2 * T)) ** 2, (x - kmax / (2 * T)) ** 2)
    if worst - a * a / 4.0 > -40.0:
        raise PoleCrossingError("u-contour shift sweeps a de Sitter pole with non-negligible residue")


def _X_desitter_quadrature(L, T, x, spec):
    cut = spec.window_cut
    if not _desitter_window_ok(L, T, cut, x):
        raise PoleCrossingError(f"light-cone pole on the v-window at L = {L:g}, x = {x:g}; use the series")
    _desitter_crossing_check(L, T, x, cut)
    r = integrate_adaptive(lambda u, v: _desitter(u, v, L, T), "quarter", "plus", spec, omega=x)
    return -r.value, r.rel_error


def exchange_amplitude(scenario: ScenarioSpec, params: DetectorParams, L: float,
                       spec: QuadratureSpec = QuadratureSpec(), method: str | None = None) -> Estimate:
    """Time-ordered exchange amplitude between the detectors (units of eta0**2)."""
    red, x, Lr = _reduced(scenario, params, L)
    method = _resolve(spec, method)
    if not Lr > 0:
        raise DomainError("L must be > 0")
    if red.kind == "vacuum":
        if method == "quadrature":
            v, e = _X_quadrature_factorized(Lr, 0.0, x, spec, True)
            return Estimate(v, e, "quadrature")
        if method == "series":
            v, e = series_integrate(series_expand(red, Lr, spec), "X", 1.0, x)
            return Estimate(v, e, "series")
        return Estimate(_X0(x, Lr), ROUNDOFF, "closed_form")
    check_guards(red, Lr)
    T = red.T
    if red.kind == "thermal":
        if method in ("auto", "series"):
            try:
                v, e = series_integrate(series_expand(red, Lr, spec), "X", 1.0, x)
                return Estimate(v, e, "series")
            except AsymptoticBreakdownError:
                if method == "series":
                    raise
            method = "image_sum"
        if method == "quadrature":
            v, e = _X_quadrature_factorized(Lr, T, x, spec, False)
            return Estimate(v, e, "quadrature")
        if method == "image_sum":
            hat, e = _thermal_image_sum_hat(Lr, T)
            return Estimate(ScaledComplex.from_log(-x * x, hat), e, "image_sum")
        raise DomainError(f"method {method!r} not available for thermal X")
    # de Sitter
    if method in ("auto", "series"):
        try:
            v, e = series_integrate(series_expand(red, Lr, spec), "X", 1.0, x)
            return Estimate(v, e, "series")
        except AsymptoticBreakdownError:
            if method == "series":
                raise
        method = "quadrature"
    if method == "quadrature":
        v, e = _X_desitter_quadrature(Lr, T, x, spec)
        return Estimate(v, e, "quadrature")
    raise DomainError(f"method {method!r} not available for de Sitter X")


# -------------------------------------------------------------------------
# negativity

def negativity(A, X) -> ScaledComplex:
    """``max(|X| - A, 0)``; the shared exp(-sigma^2 Omega^2) scale cancels exactly."""
    A = ScaledComplex.coerce(A)
    X = ScaledComplex.coerce(X)
    if A.mantissa.real < 0:
        raise DomainError("A must be >= 0")
    d = abs(X) - A.real
    return d if d.mantissa.real > 0 else ScaledComplex()


def observe(scenario: ScenarioSpec, params: DetectorParams, L: float,
            spec: QuadratureSpec = QuadratureSpec(), method: str | None = None) -> ObservableResult:
    """A, X and N at one parameter point, evaluated on a common method tier."""
    a = response_probability(scenario, params, spec, method)
    x = exchange_amplitude(scenario, params, L, spec, method)
    if _resolve(spec, method) == "auto" and a.method != x.method and scenario.kind != "vacuum":
        # keep both sides on the exact tier once either side left the series
        exact = "image_sum" if scenario.kind == "thermal" else "quadrature"
        if a.method == "series":
            a = response_probability(scenario, params, spec, "image_sum")
        if x.method == "series":
            x = exchange_amplitude(scenario, params, L, spec, exact)
    n = negativity(a.value, x.value)
    err = a.rel_error + x.rel_error
    label = a.method if a.method == x.method else f"{a.method}+{x.method}"
    return ObservableResult(a.value.real, x.value, n, label, err, a.rel_error, x.rel_error)


def observe_exact(scenario: ScenarioSpec, params: DetectorParams, L: float,
                  spec: QuadratureSpec = QuadratureSpec()) -> ObservableResult:
    """Like :func:`observe` but on the non-perturbative tier only."""
    if scenario.kind == "vacuum":
        return observe(scenario, params, L, spec, "closed_form")
    a = response_probability(scenario, params, spec, "image_sum")
    x = exchange_amplitude(scenario, params, L, spec,
                           "image_sum" if scenario.kind == "thermal" else "quadrature")
    n = negativity(a.value, x.value)
    label = a.method if a.method == x.method else f"{a.method}+{x.method}"
    return ObservableResult(a.value.real, x.value, n, label, a.rel_error + x.rel_error,
                            a.rel_error, x.rel_error)
