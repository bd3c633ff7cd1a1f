"""Underflow-safe special functions.

The error-function family and the Faddeeva function are delegated to
``scipy.special`` (Cephes / the Johnson Faddeeva package).  This module adds
the pieces scipy does not provide in a cancellation-free form:

* :func:`erfcx_deficit` -- ``1 - sqrt(pi) x erfcx(x)``, the bracket of the
  vacuum excitation probability, which loses all digits to cancellation
  for large ``x`` if computed naively.
* :func:`csch_coth` -- hyperbolic cosecant/cotangent with Laurent forms
  at the origin, overflow-free far from it, and structured pole errors.

Region boundaries
-----------------
``erfcx_deficit``: direct formula for ``x < 2``; Laplace continued fraction
for ``x >= 2``.
``csch_coth``: Laurent series for ``|z| < 1e-3``; ``1/sinh``, ``cosh/sinh``
for ``|Re z| <= 20``; exponential forms beyond.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import special as sp

from .errors import DomainError, SingularityError

SQRT_PI = math.sqrt(math.pi)

DEFICIT_SWITCH = 2.0
LAURENT_RADIUS = 1e-3
EXP_FORM_SWITCH = 20.0
POLE_GUARD = 1e-30


class ErfFamily(NamedTuple):
    erf: float
    erfc: float
    erfcx: float
    erfi: float
    dawson: float


def _check_finite(x):
    if not np.all(np.isfinite(x)):
        raise DomainError(f"non-finite argument {x!r}")


def erf_family(x: float) -> ErfFamily:
    """All five real error-function variants at ``x``.

    ``erfi`` overflows to ``inf`` for ``|x| > ~26.6``; use ``dawson`` (which is
    ``sqrt(pi)/2 * exp(-x**2) * erfi(x)``) at large arguments.
    """
    _check_finite(x)
    x = float(x)
    return ErfFamily(
        float(sp.erf(x)),
        float(sp.erfc(x)),
        float(sp.erfcx(x)),
        float(sp.erfi(x)),
        float(sp.dawsn(x)),
    )


def dawson(x):
    _check_finite(x)
    return sp.dawsn(x)


def erfcx(x):
    _check_finite(x)
    return sp.erfcx(x)


def faddeeva(z):
    """``w(z) = exp(-z**2) erfc(-i z)`` on the closed upper half-plane."""
    z = np.asarray(z, dtype=complex)
    _check_finite(z)
    if np.any(z.imag < 0):
        raise DomainError("faddeeva requires Im(z) >= 0; reflect with w(-z) = 2exp(-z^2) - w(z)")
    out = sp.wofz(z)
    return complex(out) if out.ndim == 0 else out


def _deficit_cf(x: np.ndarray) -> np.ndarray:
    # r = q / (x + q), q = (1/2)/(x + 1/(x + (3/2)/(x + ...)))
    n_terms = int(30 + 600.0 / float(np.min(x)) ** 2)
    t = np.zeros_like(x)
    for k in range(n_terms, 0, -1):
        t = (0.5 * k) / (x + t)
    return t / (x + t)


def erfcx_deficit(x):
    """``1 - sqrt(pi) * x * erfcx(x)`` for ``x >= 0`` without cancellation.

    Behaves as ``1/(2 x**2)`` for large ``x``; equals 1 at ``x = 0``.
    """
    arr = np.asarray(x, dtype=float)
    _check_finite(arr)
    if np.any(arr < 0):
        raise DomainError("erfcx_deficit is defined here for x >= 0")
    out = np.empty_like(arr)
    small = arr < DEFICIT_SWITCH
    if np.any(small):
        xs = arr[small]
        out[small] = 1.0 - SQRT_PI * xs * sp.erfcx(xs)
    if np.any(~small):
        out[~small] = _deficit_cf(arr[~small])
    return float(out) if out.ndim == 0 else out


class CschCoth(NamedTuple):
    csch: complex
    coth: complex


def _pole_check(z: np.ndarray):
    k = np.rint(z.imag / math.pi)
    dist = np.abs(z - 1j * math.pi * k)
    bad = dist < POLE_GUARD
    if np.any(bad):
        kk = int(k[bad].flat[0])
        raise SingularityError(f"csch/coth pole at z = {kk}i*pi", pole=kk)


def csch_coth(z) -> CschCoth:
    """Hyperbolic cosecant and cotangent of a complex scalar or array."""
    z = np.asarray(z, dtype=complex)
    _check_finite(z)
    _pole_check(z)
    csch = np.empty_like(z)
    coth = np.empty_like(z)

    near = np.abs(z) < LAURENT_RADIUS
    if np.any(near):
        w = z[near]
        w2 = w * w
        csch[near] = 1.0 / w - w / 6.0 + 7.0 * w * w2 / 360.0 - 31.0 * w * w2 * w2 / 15120.0
        coth[near] = 1.0 / w + w / 3.0 - w * w2 / 45.0 + 2.0 * w * w2 * w2 / 945.0

    mid = ~near & (np.abs(z.real) <= EXP_FORM_SWITCH)
    if np.any(mid):
        s = np.sinh(z[mid])
        csch[mid] = 1.0 / s
        coth[mid] = np.cosh(z[mid]) / s

    far = ~near & ~mid
    if np.any(far):
        sign = np.sign(z[far].real)
        w = z[far] * sign
        q = np.exp(-2.0 * w)
        csch[far] = sign * 2.0 * np.exp(-w) / (1.0 - q)
        coth[far] = sign * (1.0 + q) / (1.0 - q)

    if z.ndim == 0:
        return CschCoth(complex(csch), complex(coth))
    return CschCoth(csch, coth)


def xcoth(x):
    """``x * coth(x)``, regular (= 1) at the origin."""
    x = np.asarray(x, dtype=complex)
    out = np.ones_like(x)
    nz = np.abs(x) > 0
    if np.any(nz):
        out[nz] = x[nz] * csch_coth(x[nz]).coth
    return complex(out) if out.ndim == 0 else out
