"""Gaussian-window moments and adaptive quadrature in sum/difference coordinates.

Conventions used everywhere in the package (sigma = 1 unless passed):

* ``u = t + t'``, ``v = t - t'``; ``dt dt' = du dv / 2``;
* the product of two windows is ``exp(-(u**2 + v**2) / 4)``;
* time ordering ``t' < t`` is ``v > 0``.

Oscillatory phases are removed by moving the contour: for the phase
``exp(-i Omega v)`` the line ``v = w - 2i Omega`` turns
``exp(-v**2/4 - i Omega v)`` into ``exp(-Omega**2) exp(-w**2/4)``, and the
common factor ``exp(-Omega**2)`` goes into the
:class:`~udwent.scaled.ScaledComplex` exponent.  The kernel must be analytic
in the swept strip; callers check that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial import legendre

from .errors import AccuracyError, DomainError
from .scaled import ScaledComplex

SQRT_PI = math.sqrt(math.pi)
METHODS = ("auto", "closed_form", "series", "quadrature", "image_sum")


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol_1d: float = 1e-9
    rel_tol_2d: float = 1e-7
    window_cut: float = 12.0
    eps_schedule: tuple[float, ...] = tuple(2.0**-k for k in range(4, 11))
    series_order: int = 8
    method: str = "auto"
    max_panels: int = 2000

    def __post_init__(self):
        if self.window_cut < 8:
            raise ValueError("window_cut must be >= 8 sigma")
        if self.series_order < 2 or self.series_order % 2:
            raise ValueError("series_order must be an even integer >= 2")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if not (self.rel_tol_1d > 0 and self.rel_tol_2d > 0):
            raise ValueError("tolerances must be positive")

    def with_(self, **kw) -> "QuadratureSpec":
        return replace(self, **kw)


@dataclass(frozen=True)
class QuadResult:
    """Integral value and a conservative absolute error estimate (same scale)."""

    value: ScaledComplex
    error: ScaledComplex = field(default_factory=ScaledComplex)
    panels: int = 0

    @property
    def rel_error(self) -> float:
        if self.value.is_zero():
            return 0.0 if self.error.is_zero() else math.inf
        return abs(self.error.ratio(self.value))


# -------------------------------------------------------------------------
# moments

@lru_cache(maxsize=None)
def _moment_poly(n: int) -> np.ndarray:
    """Coefficients (ascending) of p_n with G_n = 2 sqrt(pi) e^{-x^2} p_n(x), x = Omega."""
    p = np.array([1.0 + 0j])
    for _ in range(n):
        dp = np.polynomial.polynomial.polyder(p) if len(p) > 1 else np.array([0j])
        two_x_p = np.concatenate(([0j], 2.0 * p))
        dp = np.concatenate((dp, np.zeros(len(two_x_p) - len(dp), dtype=complex)))
        p = 1j * (dp - two_x_p)
    return p


def gaussian_moment(n: int, sigma: float = 1.0, omega: float = 0.0) -> ScaledComplex:
    """``G_n = int v**n exp(-v**2/(4 sigma**2)) exp(-i Omega v) dv`` in scaled form.

    Built from ``G_0 = 2 sigma sqrt(pi) exp(-sigma**2 Omega**2)`` by the exact
    recurrence ``G_{n+1} = i dG_n/dOmega``.
    """
    if n < 0:
        raise DomainError("moment order must be >= 0")
    x = sigma * omega
    poly = np.polynomial.polynomial.polyval(x, _moment_poly(n))
    base = ScaledComplex.from_log(-x * x, 2.0 * SQRT_PI * sigma ** (n + 1))
    return base * complex(poly)


def u_moment(m: int, sigma: float = 1.0, omega: float = 0.0) -> ScaledComplex:
    """``int u**m exp(-u**2/(4 sigma**2)) exp(+i Omega u) du`` (= G_m at -Omega)."""
    return gaussian_moment(m, sigma, -omega)


def half_gaussian_moment(n: int, sigma: float = 1.0) -> float:
    """``H_n = int_0^inf v**n exp(-v**2/(4 sigma**2)) dv``."""
    if n < 0:
        raise DomainError("moment order must be >= 0")
    return math.gamma((n + 1) / 2) * (2.0 * sigma) ** (n + 1) / 2.0


# -------------------------------------------------------------------------
# 1D adaptive engine

_LO = legendre.leggauss(12)
_HI = legendre.leggauss(24)


def _panel(f, a, b):
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    lo = h * np.dot(_LO[1], f(c + h * _LO[0]))
    hi = h * np.dot(_HI[1], f(c + h * _HI[0]))
    return complex(hi), abs(hi - lo)


def adaptive(f: Callable, a: float, b: float, rel_tol: float, abs_tol: float = 0.0,
             breakpoints=(), max_panels: int = 2000) -> tuple[complex, float, int]:
    """Adaptive Gauss-Legendre (12/24) panel subdivision of a vectorized ``f``.

    The worst panel is bisected until the summed error estimate meets the
    tolerance.  Summation runs in left-endpoint order, so the result is
    independent of evaluation history beyond the (deterministic) split sequence.
    """
    edges = sorted({a, b, *[p for p in breakpoints if a < p < b]})
    panels = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, err = _panel(f, lo, hi)
        panels.append([lo, hi, val, err])
    while True:
        total = sum(p[2] for p in sorted(panels, key=lambda p: p[0]))
        err = sum(p[3] for p in panels)
        if err <= max(rel_tol * abs(total), abs_tol):
            return total, err, len(panels)
        if len(panels) >= max_panels:
            raise AccuracyError(f"adaptive quadrature did not converge ({len(panels)} panels)",
                                value=total, error=err)
        idx = max(range(len(panels)), key=lambda i: (panels[i][3], -i))
        lo, hi, _, _ = panels.pop(idx)
        mid = 0.5 * (lo + hi)
        for x0, x1 in ((lo, mid), (mid, hi)):
            val, e = _panel(f, x0, x1)
            panels.append([x0, x1, val, e])


def integrate_adaptive(kernel: Callable, domain: str = "full", phase: str = "none",
                       spec: QuadratureSpec = QuadratureSpec(), omega: float = 0.0,
                       shift: float | None = None, pole: float | None = None,
                       rel_tol: float | None = None) -> QuadResult:
    """Integrate ``window * phase * kernel`` over one of the standard domains.

    domain
        ``"full"``: ``int_R exp(-x**2/4) phase(x) kernel(x) dx``.
        ``"half"``: ``int_0^inf exp(-v**2/4) kernel(v) dv`` (no phase).  With
        ``pole = c`` the kernel is read as the regular numerator ``g(v)`` of
        ``g(v) / (v - c - i0)`` and the principal value plus the ``i pi``
        half-residue is returned.
        ``"quarter"``: ``int_0^inf dv int_R du exp(-(u**2+v**2)/4) phase(u) kernel(u, v)``.
    phase
        ``"none"``, ``"minus"`` (``exp(-i Omega x)``) or ``"plus"`` (``exp(+i Omega u)``).
    shift
        Contour offset ``delta`` (downward for ``minus``, upward for ``plus``).
        Defaults to ``2 Omega``, which removes the oscillation entirely.
    """
    cut = spec.window_cut
    if domain == "half":
        if phase != "none":
            raise DomainError("half-line integrals take no phase")
        return _half_line(kernel, cut, rel_tol or spec.rel_tol_1d, pole, spec.max_panels)
    if domain == "full":
        return _full_line(kernel, cut, phase, omega, shift, rel_tol or spec.rel_tol_1d, spec.max_panels)
    if domain == "quarter":
        return _quarter_plane(kernel, cut, phase, omega, shift, rel_tol or spec.rel_tol_2d, spec.max_panels)
    raise DomainError(f"unknown domain {domain!r}")


def _phase_setup(phase, omega, shift):
    if phase == "none":
        sign, omega = -1, 0.0
    elif phase == "minus":
        sign = -1
    elif phase == "plus":
        sign = +1
    else:
        raise DomainError(f"unknown phase {phase!r}")
    delta = 2.0 * omega if shift is None else float(shift)
    # on x = w + sign*i*delta: window*phase = exp(const) exp(-w^2/4) exp(sign*i*rate*w)
    const = delta * delta / 4.0 - omega * delta
    rate = omega - delta / 2.0
    return sign, delta, const, rate


def _full_line(kernel, cut, phase, omega, shift, rel_tol, max_panels):
    sign, delta, const, rate = _phase_setup(phase, omega, shift)
    off = sign * 1j * delta

    def f(w):
        return np.exp(-w * w / 4.0 + sign * 1j * rate * w) * kernel(w + off)

    val, err, n = adaptive(f, -cut, cut, rel_tol, breakpoints=(-cut / 2, 0.0, cut / 2),
                           max_panels=max_panels)
    scale = ScaledComplex.from_log(const)
    return QuadResult(scale * val, scale * err, n)


def _half_line(kernel, cut, rel_tol, pole, max_panels):
    def h(v):
        return np.exp(-v * v / 4.0) * kernel(v)

    if pole is None or pole >= cut:
        if pole is None:
            f = h
        else:
            def f(v):
                return h(v) / (v - pole)
        val, err, n = adaptive(f, 0.0, cut, rel_tol, breakpoints=(cut / 4, cut / 2), max_panels=max_panels)
        return QuadResult(ScaledComplex.from_value(val), ScaledComplex.from_value(err), n)
    if pole <= 0:
        raise DomainError("half-line pole must lie at v > 0")
    hc = complex(h(np.array([float(pole)]))[0])

    def f(v):
        return (h(v) - hc) / (v - pole)

    val, err, n = adaptive(f, 0.0, cut, rel_tol, abs_tol=1e-300,
                           breakpoints=(pole / 2, pole, 0.5 * (pole + cut)), max_panels=max_panels)
    val += hc * math.log((cut - pole) / pole) + 1j * math.pi * hc
    return QuadResult(ScaledComplex.from_value(val), ScaledComplex.from_value(err), n)


def _quarter_plane(kernel, cut, phase, omega, shift, rel_tol, max_panels):
    sign, delta, const, rate = _phase_setup(phase, omega, shift)
    off = sign * 1j * delta
    inner_tol = rel_tol / 10.0
    stats = {"panels": 0, "rel": 0.0}

    def inner(v):
        out = np.empty(np.shape(v), dtype=complex)
        for i, vi in enumerate(np.ravel(v)):
            def g(s):
                return np.exp(-s * s / 4.0 + sign * 1j * rate * s) * kernel(s + off, vi)
            val, err, n = adaptive(g, -cut, cut, inner_tol, breakpoints=(-cut / 2, 0.0, cut / 2),
                                   max_panels=max_panels)
            stats["panels"] += n
            if val != 0:
                stats["rel"] = max(stats["rel"], err / abs(val))
            out.flat[i] = val * math.exp(-vi * vi / 4.0)
        return out

    val, err, n = adaptive(inner, 0.0, cut, rel_tol, breakpoints=(cut / 4, cut / 2), max_panels=max_panels)
    # inner errors propagate at most linearly into the outer sum
    err += stats["rel"] * abs(val)
    scale = ScaledComplex.from_log(const)
    return QuadResult(scale * val, scale * err, n + stats["panels"])


# -------------------------------------------------------------------------
# epsilon -> 0 extrapolation

def epsilon_extrapolate(evaluate: Callable[[float], complex], schedule) -> tuple[complex, float]:
    """Richardson (Neville) extrapolation of ``evaluate(eps)`` to ``eps = 0``.

    Returns the extrapolated value and the change between the last two
    extrapolants as an error estimate.
    """
    eps = np.asarray(sorted(schedule, reverse=True), dtype=float)
    vals = [complex(evaluate(e)) for e in eps]
    table = [vals]
    for k in range(1, len(eps)):
        prev = table[-1]
        row = []
        for i in range(len(prev) - 1):
            num = eps[i] * prev[i + 1] - eps[i + k] * prev[i]
            row.append(num / (eps[i] - eps[i + k]))
        table.append(row)
    best = table[-1][0]
    other = table[-2][-1] if len(table) > 1 else vals[-1]
    return best, abs(best - other)
