"""Truncated bivariate Taylor series in (u, y) and their Gaussian integrals.

The small-temperature evaluation expands a correlator about ``u = y = 0``
and integrates term by term against the window moments.  Coefficients come
from exact series algebra built on Bernoulli numbers and the geometric
reciprocal, never from numerical differentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from .errors import AsymptoticBreakdownError, DegenerateExpansionError, DomainError
from .kernels import ScenarioSpec, FOUR_PI2, delta_series_coefficients
from .quadrature import QuadratureSpec, gaussian_moment, half_gaussian_moment, u_moment
from .scaled import ScaledComplex, scaled_sum

BREAKDOWN_RATIO = 1e-3


@dataclass
class BivariateSeries:
    """``sum c[m, n] u**m y**n`` truncated at ``m <= M``, ``n <= N``.

    ``truncation_estimate`` is the modulus of the largest coefficient
    discarded by any product or reciprocal that built this series.
    """

    coeffs: np.ndarray
    truncation_estimate: float = 0.0

    def __post_init__(self):
        self.coeffs = np.array(self.coeffs, dtype=complex, ndmin=2)

    @property
    def orders(self) -> tuple[int, int]:
        M, N = self.coeffs.shape
        return M - 1, N - 1

    @classmethod
    def zeros(cls, M: int, N: int) -> "BivariateSeries":
        return cls(np.zeros((M + 1, N + 1), dtype=complex))

    @classmethod
    def constant(cls, c: complex, M: int, N: int) -> "BivariateSeries":
        s = cls.zeros(M, N)
        s.coeffs[0, 0] = c
        return s

    @classmethod
    def in_y(cls, coeffs, M: int, N: int) -> "BivariateSeries":
        s = cls.zeros(M, N)
        c = np.asarray(coeffs, dtype=complex)[: N + 1]
        s.coeffs[0, : len(c)] = c
        return s

    @classmethod
    def in_u(cls, coeffs, M: int, N: int) -> "BivariateSeries":
        s = cls.zeros(M, N)
        c = np.asarray(coeffs, dtype=complex)[: M + 1]
        s.coeffs[: len(c), 0] = c
        return s

    def _check(self, other):
        if self.coeffs.shape != other.coeffs.shape:
            raise DomainError("series orders differ")

    def __add__(self, other):
        if isinstance(other, BivariateSeries):
            self._check(other)
            return BivariateSeries(self.coeffs + other.coeffs,
                                   max(self.truncation_estimate, other.truncation_estimate))
        out = self.coeffs.copy()
        out[0, 0] += other
        return BivariateSeries(out, self.truncation_estimate)

    __radd__ = __add__

    def __neg__(self):
        return BivariateSeries(-self.coeffs, self.truncation_estimate)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, BivariateSeries):
            return BivariateSeries(self.coeffs * other, self.truncation_estimate * abs(other))
        self._check(other)
        M, N = self.orders
        a, b = self.coeffs, other.coeffs
        full = np.zeros((2 * M + 1, 2 * N + 1), dtype=complex)
        for i in range(M + 1):
            for j in range(N + 1):
                if a[i, j] != 0:
                    full[i:i + M + 1, j:j + N + 1] += a[i, j] * b
        kept = full[: M + 1, : N + 1].copy()
        full[: M + 1, : N + 1] = 0
        dropped = float(np.max(np.abs(full))) if full.size else 0.0
        return BivariateSeries(kept, max(self.truncation_estimate, other.truncation_estimate, dropped))

    __rmul__ = __mul__

    def reciprocal(self) -> "BivariateSeries":
        a = self.coeffs
        a00 = a[0, 0]
        if a00 == 0:
            raise DegenerateExpansionError("reciprocal of a series with zero constant term")
        M, N = self.orders
        b = np.zeros_like(a)
        for m in range(M + 1):
            for n in range(N + 1):
                if m == 0 and n == 0:
                    b[0, 0] = 1.0 / a00
                    continue
                acc = 0j
                for i in range(m + 1):
                    for j in range(n + 1):
                        if (i or j) and a[i, j] != 0:
                            acc += a[i, j] * b[m - i, n - j]
                b[m, n] = -acc / a00
        return BivariateSeries(b, self.truncation_estimate * abs(b[0, 0]) ** 2)

    def evaluate(self, u, y) -> complex:
        M, N = self.orders
        up = np.power(complex(u), np.arange(M + 1))
        yp = np.power(complex(y), np.arange(N + 1))
        return complex(up @ self.coeffs @ yp)


# -------------------------------------------------------------------------
# univariate building blocks (coefficient lists in the variable x)

@lru_cache(maxsize=None)
def tanh_coefficients(order: int) -> tuple[float, ...]:
    B = bernoulli(order + 2)
    c = [0.0] * (order + 1)
    for n in range(1, order // 2 + 2):
        p = 2 * n - 1
        if p <= order:
            c[p] = 2.0 ** (2 * n) * (2.0 ** (2 * n) - 1) * B[2 * n] / math.factorial(2 * n)
    return tuple(c)


def _scaled_var(coeffs, a: float):
    """Coefficients of f(a*x) given those of f(x)."""
    return [c * a**k for k, c in enumerate(coeffs)]


def _coth_shifted(c_a: float, x_scale: float, M: int, N: int) -> BivariateSeries:
    """Series in y of coth(a + x_scale*y), with coth(a) = c_a, via (c + t)/(1 + c t)."""
    t = BivariateSeries.in_y(_scaled_var(tanh_coefficients(N), x_scale), M, N)
    return (t + c_a) * (t * c_a + 1.0).reciprocal()


def series_expand(scenario: ScenarioSpec, L: float, spec: QuadratureSpec = QuadratureSpec(),
                  check: bool = True) -> BivariateSeries:
    """Taylor expansion of the cross-detector correlator about ``u = y = 0``."""
    K = spec.series_order
    kind = scenario.kind
    if check and kind != "vacuum":
        if scenario.kappa > 0.1 * (1 + 1e-12):
            raise DomainError("series expansion requires 2 pi T sigma <= 0.1")
        if L < 10:
            raise DomainError("series expansion requires L >= 10 sigma")
    if kind == "vacuum":
        # -1/(4 pi^2 (y^2 - L^2)) = (1/(4 pi^2 L^2)) sum (y/L)^(2j)
        c = [0.0] * (K + 1)
        for j in range(0, K // 2 + 1):
            c[2 * j] = 1.0 / (FOUR_PI2 * L**2) / L ** (2 * j)
        return BivariateSeries.in_y(c, K, K)
    T = scenario.T
    a = math.pi * T
    if kind == "thermal":
        c_a = 1.0 / math.tanh(a * L)
        plus = _coth_shifted(c_a, a, K, K)
        minus = _coth_shifted(c_a, -a, K, K)
        return (plus + minus) * (T / (8.0 * math.pi * L))
    # de Sitter
    sinh_c = [0.0] * (K + 1)
    for k in range(0, K // 2 + 1):
        if 2 * k + 1 <= K:
            sinh_c[2 * k + 1] = a ** (2 * k) / math.factorial(2 * k + 1)
    s = BivariateSeries.in_y(sinh_c, K, K)
    e = BivariateSeries.in_u([(2 * a) ** m / math.factorial(m) for m in range(K + 1)], K, K)
    den = s * s - e * (L * L)
    return den.reciprocal() * (-1.0 / FOUR_PI2)


def response_delta_series(T: float, spec: QuadratureSpec = QuadratureSpec()) -> BivariateSeries:
    """Series in y of ``D_T - D_0`` on one worldline; constant term ``T**2/12``."""
    K = spec.series_order
    a = delta_series_coefficients()
    c = [0.0] * (K + 1)
    for n in range(0, K // 2 + 1):
        c[2 * n] = -(T * T / 4.0) * a[n] * (math.pi * T) ** (2 * n)
    return BivariateSeries.in_y(c, K, K)


def series_integrate(series: BivariateSeries, which: str, sigma: float = 1.0,
                     omega: float = 0.0, strict: bool = True) -> tuple[ScaledComplex, float]:
    """Integrate a series term by term against the window.

    ``which="A"``: ``(1/2) sum c[m,n] M_m G_n(Omega)`` -- full-line ``v``
    moments with phase ``exp(-i Omega v)`` and phase-free ``u`` moments.
    ``which="X"``: ``-sum c[m,n] U_m(Omega) H_n`` -- ``u`` moments with phase
    ``exp(+i Omega u)`` and half-line ``v`` moments.

    Returns ``(value, rel_error)`` where the error is the summed modulus of
    the terms on the truncation boundary (``m = M`` or ``n = N``), relative
    to the sum.
    """
    M, N = series.orders
    c = series.coeffs
    terms: dict[tuple[int, int], ScaledComplex] = {}
    if which == "A":
        G = [gaussian_moment(n, sigma, omega) for n in range(N + 1)]
        Mu = [gaussian_moment(m, sigma, 0.0) for m in range(M + 1)]
        for m in range(M + 1):
            for n in range(N + 1):
                if c[m, n] != 0:
                    terms[m, n] = Mu[m] * G[n] * (0.5 * c[m, n])
    elif which == "X":
        U = [u_moment(m, sigma, omega) for m in range(M + 1)]
        H = [half_gaussian_moment(n, sigma) for n in range(N + 1)]
        for m in range(M + 1):
            for n in range(N + 1):
                if c[m, n] != 0:
                    terms[m, n] = U[m] * (-H[n] * c[m, n])
    else:
        raise DomainError("which must be 'A' or 'X'")
    total = ScaledComplex()
    for key in sorted(terms):
        total = total + terms[key]
    edge = [abs(t) for (m, n), t in terms.items() if (m == M and M > 0) or n == N]
    last = scaled_sum(edge)
    if total.is_zero():
        rel = 0.0 if last.is_zero() else math.inf
    else:
        rel = abs(last.ratio(total))
    rel = max(rel, 1e-15)
    if strict and rel > BREAKDOWN_RATIO:
        raise AsymptoticBreakdownError(
            f"last kept term is {rel:.2e} of the partial sum", value=total, error=rel)
    return total, rel
