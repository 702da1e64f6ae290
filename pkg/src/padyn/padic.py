"""Fixed relative precision p-adic numbers with rigorous precision tracking.

Exact rational orbits of a degree-two map double their height at every
step, so long trajectories are followed in Q_p instead.  A
:class:`PadicNumber` is ``p^val * (unit + O(p^prec))``; every operation
propagates the precision so that any valuation it reports is certain.  An
element with ``prec == 0`` is only known to lie in ``O(p^val)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Radius, as_scalar, format_scalar, norm, unit_part


class PrecisionError(ArithmeticError):
    """Raised when a result depends on digits that were not tracked."""


def _vp(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicNumber:
    p: int
    val: int
    unit: int
    prec: int

    @classmethod
    def from_scalar(cls, x, p: int, prec: int) -> "PadicNumber":
        x = as_scalar(x)
        if x == 0:
            # exact zero: known to arbitrary absolute precision
            return cls(p, prec + (1 << 20), 0, 0)
        v, m, n = unit_part(x, p)
        mod = p**prec
        return cls(p, v, m * pow(n, -1, mod) % mod, prec)

    @property
    def absprec(self) -> int:
        return self.val + self.prec

    @property
    def is_resolved(self) -> bool:
        return self.prec > 0

    def valuation(self) -> int:
        if self.prec == 0:
            raise PrecisionError(f"value is O({self.p}^{self.val}); valuation unknown")
        return self.val

    def norm(self) -> Radius:
        return Radius(Fraction(-self.valuation()))

    def approximation(self) -> Fraction:
        return Fraction(self.p) ** self.val * self.unit

    def _lift(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        x = as_scalar(other)
        if x == 0:
            return PadicNumber.from_scalar(0, self.p, self.prec)
        v = unit_part(x, self.p)[0]
        # enough digits for both the sum and the product to stay at self's precision
        return PadicNumber.from_scalar(x, self.p, max(self.prec, self.absprec - v, 1))

    @staticmethod
    def _normalize(p: int, k: int, s: int, absprec: int) -> "PadicNumber":
        width = absprec - k
        if width <= 0:
            return PadicNumber(p, absprec, 0, 0)
        s %= p**width
        if s == 0:
            return PadicNumber(p, absprec, 0, 0)
        v = _vp(s, p)
        return PadicNumber(p, k + v, s // p**v, width - v)

    def __add__(self, other):
        o = self._lift(other)
        absprec = min(self.absprec, o.absprec)
        k = min(self.val, o.val, absprec)
        s = sum(t.unit * self.p ** (t.val - k) for t in (self, o) if t.val < absprec)
        return self._normalize(self.p, k, s, absprec)

    __radd__ = __add__

    def __neg__(self):
        if self.prec == 0:
            return self
        return PadicNumber(self.p, self.val, -self.unit % self.p**self.prec, self.prec)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        prec = min(self.prec, o.prec)
        if prec == 0:
            return PadicNumber(self.p, self.val + o.val, 0, 0)
        return PadicNumber(self.p, self.val + o.val, self.unit * o.unit % self.p**prec, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.prec == 0:
            raise PrecisionError("division by a value indistinguishable from zero")
        prec = min(self.prec, o.prec)
        if prec == 0:
            return PadicNumber(self.p, self.val - o.val, 0, 0)
        mod = self.p**prec
        return PadicNumber(self.p, self.val - o.val, self.unit * pow(o.unit, -1, mod) % mod, prec)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __str__(self) -> str:
        if self.prec == 0:
            return f"O({self.p}^{self.val})"
        return f"{format_scalar(self.approximation())} + O({self.p}^{self.absprec})"


def distance_norm(x, p: int) -> Radius:
    """Norm of an exact scalar or of a resolved :class:`PadicNumber`."""
    if isinstance(x, PadicNumber):
        return x.norm()
    return norm(x, p)
