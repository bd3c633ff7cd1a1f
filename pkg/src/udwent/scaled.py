"""Complex numbers carried as ``mantissa * e**exponent``.

The Gaussian switching window multiplies every observable by
``exp(-sigma**2 * Omega**2)``, which underflows a double once
``sigma * Omega`` exceeds ~27.  Keeping the base-e exponent as a separate
Python integer lets such values be added, multiplied and compared exactly
in scale, so that ratios like ``|X| / A`` stay meaningful at
``sigma * Omega ~ 10**3``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from numbers import Number

# Below this relative scale an addend cannot affect a double mantissa.
_NEGLIGIBLE = -745


def _normalize(m: complex, e: int) -> tuple[complex, int]:
    if m == 0 or not cmath.isfinite(m):
        if m == 0:
            return 0j, 0
        raise OverflowError(f"non-finite mantissa {m!r}")
    shift = math.floor(math.log(abs(m)))
    if shift:
        m = m * math.exp(-shift)
        e += shift
    # one-step fixups for rounding at the interval ends
    a = abs(m)
    if a >= math.e:
        m /= math.e
        e += 1
    elif a < 1.0:
        m *= math.e
        e -= 1
    return complex(m), int(e)


@dataclass(frozen=True)
class ScaledComplex:
    """Value ``mantissa * exp(exponent)`` with ``1 <= |mantissa| < e``.

    Zero is stored as ``(0, 0)``.  Comparison operators compare *moduli*.
    """

    mantissa: complex = 0j
    exponent: int = 0

    def __post_init__(self):
        m, e = _normalize(complex(self.mantissa), int(self.exponent))
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exponent", e)

    # construction -------------------------------------------------------
    @classmethod
    def from_value(cls, z: complex | float) -> "ScaledComplex":
        return cls(complex(z), 0)

    @classmethod
    def from_log(cls, log_modulus: float, phase: complex = 1.0) -> "ScaledComplex":
        """Build ``phase * exp(log_modulus)`` without forming the exponential."""
        if math.isinf(log_modulus) and log_modulus < 0:
            return cls()
        k = math.floor(log_modulus)
        return cls(complex(phase) * math.exp(log_modulus - k), k)

    @classmethod
    def coerce(cls, x) -> "ScaledComplex":
        if isinstance(x, ScaledComplex):
            return x
        if isinstance(x, Number):
            return cls.from_value(x)
        raise TypeError(f"cannot convert {type(x).__name__} to ScaledComplex")

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.mantissa == 0

    def log_abs(self) -> float:
        """Natural log of the modulus (``-inf`` for zero)."""
        if self.is_zero():
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent

    def to_complex(self) -> complex:
        """Plain complex value; underflows to 0 and raises on overflow."""
        if self.is_zero() or self.exponent < _NEGLIGIBLE - 5:
            return 0j
        if self.exponent > 709:
            raise OverflowError("value exceeds double range")
        return self.mantissa * math.exp(self.exponent)

    def __complex__(self):
        return self.to_complex()

    def __float__(self):
        return self.to_complex().real

    @property
    def real(self) -> "ScaledComplex":
        return ScaledComplex(self.mantissa.real, self.exponent)

    @property
    def imag(self) -> "ScaledComplex":
        return ScaledComplex(self.mantissa.imag, self.exponent)

    def conjugate(self) -> "ScaledComplex":
        return ScaledComplex(self.mantissa.conjugate(), self.exponent)

    def mantissa_at(self, exponent: int) -> complex:
        """Mantissa re-expressed relative to ``exp(exponent)``."""
        if self.is_zero():
            return 0j
        d = self.exponent - exponent
        if d < _NEGLIGIBLE:
            return 0j
        return self.mantissa * math.exp(d)

    # arithmetic ---------------------------------------------------------
    def __abs__(self) -> "ScaledComplex":
        return ScaledComplex(abs(self.mantissa), self.exponent)

    def __neg__(self) -> "ScaledComplex":
        return ScaledComplex(-self.mantissa, self.exponent)

    def __add__(self, other) -> "ScaledComplex":
        other = ScaledComplex.coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        big, small = (self, other) if self.exponent >= other.exponent else (other, self)
        return ScaledComplex(big.mantissa + small.mantissa_at(big.exponent), big.exponent)

    __radd__ = __add__

    def __sub__(self, other) -> "ScaledComplex":
        return self + (-ScaledComplex.coerce(other))

    def __rsub__(self, other) -> "ScaledComplex":
        return ScaledComplex.coerce(other) - self

    def __mul__(self, other) -> "ScaledComplex":
        other = ScaledComplex.coerce(other)
        if self.is_zero() or other.is_zero():
            return ScaledComplex()
        return ScaledComplex(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScaledComplex":
        other = ScaledComplex.coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero ScaledComplex")
        return ScaledComplex(self.mantissa / other.mantissa, self.exponent - other.exponent)

    def __rtruediv__(self, other) -> "ScaledComplex":
        return ScaledComplex.coerce(other) / self

    def ratio(self, other) -> complex:
        """``self / other`` as a plain complex number (the common scale cancels)."""
        return (self / other).to_complex()

    # modulus comparisons -------------------------------------------------
    def _key(self) -> float:
        return self.log_abs()

    def __lt__(self, other):
        return self._key() < ScaledComplex.coerce(other)._key()

    def __le__(self, other):
        return self._key() <= ScaledComplex.coerce(other)._key()

    def __gt__(self, other):
        return self._key() > ScaledComplex.coerce(other)._key()

    def __ge__(self, other):
        return self._key() >= ScaledComplex.coerce(other)._key()

    def isclose(self, other, rel_tol: float = 1e-9, abs_tol: float = 0.0) -> bool:
        other = ScaledComplex.coerce(other)
        scale = max(self.exponent, other.exponent)
        a, b = self.mantissa_at(scale), other.mantissa_at(scale)
        return abs(a - b) <= max(rel_tol * max(abs(a), abs(b)), abs_tol)

    def __repr__(self):
        return f"ScaledComplex({self.mantissa!r}, {self.exponent})"


def scaled_sum(values) -> ScaledComplex:
    """Sum a sequence in index order (deterministic)."""
    total = ScaledComplex()
    for v in values:
        total = total + v
    return total
