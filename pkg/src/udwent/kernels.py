"""Two-point functions of the massless conformal scalar on the detector pair.

All inputs are in units of the window width (sigma = 1): times and the
comoving separation ``L`` in sigma, temperature ``T`` in 1/sigma.  The
detectors sit at ``x1 = +-L/2``; ``u = t + t'`` and ``v = t - t'`` are the
sum and difference of their proper times, and the regulated difference
``y = v - i*eps`` is formed once, in :attr:`KernelInput.y`.

The array-level helpers (leading underscore) take ``y`` directly and accept
numpy arrays. They skip the guards, since the quadrature and series code
calls them on complex contours where those checks would not apply.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import bernoulli

from .errors import DomainError, GuardError, SingularityError
from .special import csch_coth

FOUR_PI2 = 4.0 * math.pi**2
MAX_TWO_PI_T = 0.1
MIN_SEPARATION = 10.0


@dataclass(frozen=True)
class ScenarioSpec:
    """Field state: 'vacuum', 'thermal' (Minkowski at T) or 'desitter' (kappa = 2 pi T)."""

    kind: str
    T: float = 0.0

    def __post_init__(self):
        kind = self.kind.lower().replace("_", "").replace("-", "")
        if kind not in ("vacuum", "thermal", "desitter"):
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if kind == "vacuum" and self.T != 0:
            raise ValueError("vacuum scenario requires T = 0")
        if kind != "vacuum" and not self.T > 0:
            raise ValueError(f"{kind} scenario requires T > 0")

    @classmethod
    def vacuum(cls) -> "ScenarioSpec":
        return cls("vacuum", 0.0)

    @classmethod
    def thermal(cls, two_pi_T: float) -> "ScenarioSpec":
        return cls("thermal", two_pi_T / (2 * math.pi))

    @classmethod
    def desitter(cls, two_pi_T: float) -> "ScenarioSpec":
        return cls("desitter", two_pi_T / (2 * math.pi))

    @classmethod
    def from_name(cls, kind: str, two_pi_T: float) -> "ScenarioSpec":
        if kind.lower() == "vacuum":
            return cls.vacuum()
        return cls(kind, two_pi_T / (2 * math.pi))

    @property
    def kappa(self) -> float:
        return 2 * math.pi * self.T

    @property
    def two_pi_T(self) -> float:
        return self.kappa

    @property
    def horizon(self) -> float:
        return math.inf if self.T == 0 else 1.0 / self.kappa

    @property
    def ricci(self) -> float:
        return 12.0 * self.kappa**2

    @property
    def label(self) -> str:
        return self.kind


def check_guards(scenario: ScenarioSpec, L: float | None = None) -> None:
    """Raise :class:`GuardError` outside the small-T, well-separated regime."""
    if scenario.kappa > MAX_TWO_PI_T * (1 + 1e-12):
        raise GuardError(f"2 pi T sigma = {scenario.kappa:g} exceeds {MAX_TWO_PI_T}")
    if L is not None and not L >= MIN_SEPARATION:
        raise GuardError(f"L = {L:g} sigma is below the {MIN_SEPARATION:g} sigma separation guard")


@dataclass(frozen=True)
class KernelInput:
    u: float = 0.0
    v: float = 0.0
    epsilon: float = 0.0
    L: float = 1.0
    T: float = 0.0

    def __post_init__(self):
        if self.epsilon < 0:
            raise DomainError("epsilon must be >= 0")
        if self.T < 0:
            raise DomainError("T must be >= 0")
        if not self.L > 0:
            raise DomainError("L must be > 0")

    @property
    def y(self) -> complex:
        return complex(self.v, -self.epsilon)


# -------------------------------------------------------------------------
# array-level kernels

def _vacuum(y, L):
    return -1.0 / (FOUR_PI2 * (y * y - L * L))


def _response(y, T):
    c = csch_coth(math.pi * T * np.asarray(y, dtype=complex)).csch
    return -(T * T / 4.0) * c * c


@lru_cache(maxsize=None)
def delta_series_coefficients(n_terms: int = 16) -> tuple[float, ...]:
    """``a_n`` with ``csch(z)**2 - 1/z**2 = sum_n a_n z**(2n)``."""
    B = bernoulli(2 * n_terms + 2)
    out = []
    for n in range(1, n_terms + 2):
        out.append(-(2.0 ** (2 * n)) * B[2 * n] * (2 * n - 1) / math.factorial(2 * n))
    return tuple(out)


def _delta_response(y, T):
    """``D_T - D_0`` on the worldline; series near the origin, direct difference elsewhere."""
    y = np.asarray(y, dtype=complex)
    z = math.pi * T * y
    out = np.empty_like(z)
    near = np.abs(z) < 0.5
    if np.any(near):
        z2 = z[near] ** 2
        acc = np.zeros_like(z2)
        for a in reversed(delta_series_coefficients()):
            acc = acc * z2 + a
        out[near] = acc
    if np.any(~near):
        zz = z[~near]
        c = csch_coth(zz).csch
        out[~near] = c * c - 1.0 / (zz * zz)
    out = -(T * T / 4.0) * out
    return complex(out) if out.ndim == 0 else out


def _thermal(y, L, T):
    a = math.pi * T
    y = np.asarray(y, dtype=complex)
    c1 = csch_coth(a * (L - y)).coth
    c2 = csch_coth(a * (L + y)).coth
    return (T / (8.0 * math.pi * L)) * (c1 + c2)


def _sinh_over(y, T):
    """``sinh(pi T y) / (pi T)`` with the T -> 0 limit handled."""
    y = np.asarray(y, dtype=complex)
    z = math.pi * T * y
    small = np.abs(z) < 1e-4
    out = np.empty_like(y)
    if np.any(small):
        zs = z[small]
        out[small] = y[small] * (1.0 + zs * zs / 6.0 + zs**4 / 120.0)
    if np.any(~small):
        out[~small] = np.sinh(z[~small]) / (math.pi * T)
    return out


def _desitter_denominator(u, y, L, T):
    s = _sinh_over(y, T)
    return s * s - np.exp(2.0 * math.pi * T * np.asarray(u, dtype=complex)) * L * L


def _desitter(u, y, L, T):
    return -1.0 / (FOUR_PI2 * _desitter_denominator(u, y, L, T))


def _scalar(x):
    x = np.asarray(x)
    return complex(x) if x.ndim == 0 else x


# -------------------------------------------------------------------------
# public, guarded kernels

def vacuum_wightman(inp: KernelInput) -> complex:
    """Minkowski-vacuum correlator between the two detectors."""
    v, L = inp.v, inp.L
    if inp.epsilon == 0 and abs(v * v - L * L) < 1e-12 * max(1.0, L * L):
        raise SingularityError(f"light-cone pole at |v| = L = {L:g}", pole="light-cone")
    return complex(_vacuum(inp.y, L))


def response_kernel(v: float, epsilon: float, T: float) -> complex:
    """Thermal detector response function along one worldline."""
    if not T > 0:
        raise DomainError("response_kernel requires T > 0")
    if epsilon == 0 and v == 0:
        raise SingularityError("coincidence pole at v = 0", pole=0)
    return _scalar(_response(complex(v, -epsilon), T))


def vacuum_coincidence_kernel(v: float, epsilon: float = 0.0) -> complex:
    y = complex(v, -epsilon)
    if y == 0:
        raise SingularityError("coincidence pole at v = 0", pole=0)
    return -1.0 / (FOUR_PI2 * y * y)


def delta_response_kernel(v, T: float) -> complex:
    """Regular part ``D_T - D_0`` of the response function (even, analytic at 0)."""
    if not T > 0:
        raise DomainError("delta_response_kernel requires T > 0")
    if np.any(np.abs(math.pi * T * np.asarray(v)) >= math.pi):
        raise DomainError("|pi T v| >= pi: outside the Laurent annulus; use a direct difference")
    return _scalar(_delta_response(v, T))


def thermal_wightman(inp: KernelInput) -> complex:
    """Thermal Minkowski correlator between the two detectors (u-independent)."""
    if not inp.T > 0:
        raise DomainError("thermal_wightman requires T > 0")
    y, L, T = inp.y, inp.L, inp.T
    for sign in (+1, -1):
        # poles where L - sign*y = i k / T
        w = (L - sign * y) * T
        k = round(w.imag)
        if abs(w - 1j * k) * math.pi < 1e-30 or (inp.epsilon == 0 and abs(L - sign * y) < 1e-12 * max(1.0, L)):
            raise SingularityError(f"thermal pole at y = {sign * L:+g} + {k}i/T", pole=(sign, -sign * k))
    return complex(_thermal(y, L, T))


def desitter_wightman(inp: KernelInput) -> complex:
    """de Sitter conformal-vacuum correlator between the comoving detectors."""
    if not inp.T > 0:
        raise DomainError("desitter_wightman requires T > 0")
    u, y, L, T = inp.u, inp.y, inp.L, inp.T
    s = complex(_sinh_over(y, T))
    e = math.exp(2.0 * math.pi * T * u) * L * L
    den = s * s - e
    if abs(den) <= 1e-12 * (abs(s * s) + e):
        raise SingularityError("de Sitter light-cone pole", pole="light-cone")
    return -1.0 / (FOUR_PI2 * den)
