"""Exact p-adic valuation arithmetic on the rationals.

Scalars are :class:`fractions.Fraction` (always reduced, zero is ``0/1``).
Norms live in the value group ``p^Q`` and are carried by :class:`Radius`,
which stores the exponent exactly so that radii such as ``p^(-5/2)`` are
representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Union

Scalar = Union[int, Fraction]

INFINITE = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PadicContext:
    p: int
    default_level: int = 32

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.default_level < 1:
            raise ValueError("default_level must be >= 1")


def as_scalar(x) -> Fraction:
    """Coerce an int, Fraction or ``"num/den"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def format_scalar(x: Fraction) -> str:
    x = as_scalar(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _vp_int(n: int, p: int) -> int:
    # n != 0
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x: Scalar, ctx: PadicContext | int):
    """Exponent of p in x; ``math.inf`` for zero."""
    p = ctx if isinstance(ctx, int) else ctx.p
    x = as_scalar(x)
    if x == 0:
        return INFINITE
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def unit_part(x: Scalar, p: int) -> tuple[int, int, int]:
    """Split nonzero ``x = p^v * m/n`` with p dividing neither m nor n."""
    x = as_scalar(x)
    if x == 0:
        raise ValueError("zero has no unit part")
    m, n = x.numerator, x.denominator
    vm, vn = _vp_int(m, p), _vp_int(n, p)
    return vm - vn, m // p**vm, n // p**vn


@total_ordering
@dataclass(frozen=True)
class Radius:
    """An element ``p^exp`` of the value group, or zero when ``exp is None``."""

    exp: Fraction | None

    def __post_init__(self):
        if self.exp is not None and not isinstance(self.exp, Fraction):
            object.__setattr__(self, "exp", as_scalar(self.exp))

    @classmethod
    def of(cls, exp) -> "Radius":
        return cls(as_scalar(exp))

    @property
    def is_zero(self) -> bool:
        return self.exp is None

    def __lt__(self, other: "Radius") -> bool:
        if not isinstance(other, Radius):
            return NotImplemented
        if other.exp is None:
            return False
        if self.exp is None:
            return True
        return self.exp < other.exp

    def __mul__(self, other: "Radius") -> "Radius":
        if not isinstance(other, Radius):
            return NotImplemented
        if self.exp is None or other.exp is None:
            return ZERO
        return Radius(self.exp + other.exp)

    def __truediv__(self, other: "Radius") -> "Radius":
        if not isinstance(other, Radius):
            return NotImplemented
        if other.exp is None:
            raise ZeroDivisionError("division by the zero radius")
        if self.exp is None:
            return ZERO
        return Radius(self.exp - other.exp)

    def __pow__(self, q) -> "Radius":
        q = as_scalar(q)
        if self.exp is None:
            if q <= 0:
                raise ValueError("zero radius raised to a non-positive power")
            return ZERO
        return Radius(self.exp * q)

    def value(self, p: int) -> Fraction:
        """The real number ``p^exp`` as an exact rational (integer exponents only)."""
        if self.exp is None:
            return Fraction(0)
        if self.exp.denominator != 1:
            raise ValueError(f"p^{self.exp} is irrational")
        return Fraction(p) ** int(self.exp)

    def __str__(self) -> str:
        if self.exp is None:
            return "0"
        return f"p^{format_scalar(self.exp)}"


ZERO = Radius(None)
ONE = Radius(Fraction(0))


def radius_mul(r1: Radius, r2: Radius) -> Radius:
    return r1 * r2


def radius_pow(r: Radius, q) -> Radius:
    return r**q


def radius_cmp(r1: Radius, r2: Radius) -> int:
    """-1, 0 or 1 as r1 is below, equal to or above r2."""
    return (r1 > r2) - (r1 < r2)


@lru_cache(maxsize=4096)
def _norm_of_valuation(v: int) -> Radius:
    return Radius(Fraction(-v))


def norm(x: Scalar, ctx: PadicContext | int) -> Radius:
    v = valuation(x, ctx)
    if v == INFINITE:
        return ZERO
    return _norm_of_valuation(v)


def _is_qr_unit(u: int, p: int) -> bool:
    if p == 2:
        return u % 8 == 1
    return pow(u % p, (p - 1) // 2, p) == 1


def sqrt_exists(x: Scalar, ctx: PadicContext) -> bool:
    """Whether nonzero x is a square in Q_p."""
    x = as_scalar(x)
    if x == 0:
        raise ValueError("sqrt_exists is undefined for zero")
    p = ctx.p
    v, m, n = unit_part(x, p)
    if v % 2:
        return False
    # m/n is a square iff m*n is (n^2 is a unit square)
    return _is_qr_unit(m * n, p)


def _tonelli_shanks(u: int, p: int) -> int:
    u %= p
    if p % 4 == 3:
        return pow(u, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(u, q, p), pow(u, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def unit_sqrt(u: int, p: int, level: int) -> int:
    """A root s of ``s^2 = u (mod p^level)`` for a p-adic unit square u.

    For odd p the returned root has the smaller first digit of the two; for
    p = 2 it is the least representative in ``[0, 2^level)``.
    """
    mod = p**level
    if p == 2:
        if u % 8 != 1:
            raise ValueError(f"{u} is not a 2-adic square")
        s = 1
        # s^2 = u mod 2^k  ->  s or s + 2^(k-1) works mod 2^(k+1)
        for k in range(3, level + 1):
            if (s * s - u) % (1 << (k + 1)):
                s += 1 << (k - 1)
        s %= mod
        cands = {(t + h) % mod for t in (s, -s) for h in (0, mod // 2 if level > 1 else 0)}
        return min(c for c in cands if (c * c - u) % mod == 0)
    if not _is_qr_unit(u, p):
        raise ValueError(f"{u} is not a square mod {p}")
    s = _tonelli_shanks(u, p)
    s = min(s, p - s)
    k = 1
    while k < level:
        k = min(2 * k, level)
        pk = p**k
        s = (s - (s * s - u) * pow(2 * s, -1, pk)) % pk
    return s % mod


def hensel_sqrt(x: Scalar, ctx: PadicContext, level: int | None = None) -> Fraction:
    """Approximate square root of x in Q_p.

    Returns ``y = p^(v/2) * s`` where ``v = valuation(x)`` and s is an integer
    with ``s^2`` congruent to the unit part of x modulo ``p^level``; so
    ``valuation(y^2 - x) >= valuation(x) + level``.
    """
    x = as_scalar(x)
    if x == 0:
        return Fraction(0)
    level = ctx.default_level if level is None else level
    if level < 1:
        raise ValueError("level must be >= 1")
    p = ctx.p
    v, m, n = unit_part(x, p)
    if v % 2:
        raise ValueError(f"{x} has odd valuation {v}; no square root in Q_{p}")
    if not sqrt_exists(x, ctx):
        raise ValueError(f"{x} is not a square in Q_{p}")
    mod = p**level
    u = m * pow(n, -1, mod) % mod
    s = unit_sqrt(u, p, level)
    return Fraction(p) ** (v // 2) * s


def residue(x: Scalar, ctx: PadicContext, level: int) -> int:
    """Canonical representative of x modulo ``p^level`` (x must be p-integral)."""
    x = as_scalar(x)
    p = ctx.p
    if x.denominator % p == 0:
        raise ValueError(f"{format_scalar(x)} has negative valuation at p={p}")
    mod = p**level
    return x.numerator * pow(x.denominator, -1, mod) % mod


@dataclass(frozen=True)
class ResidueSet:
    level: int
    modulus: int
    members: frozenset

    def __post_init__(self):
        if any(not 0 <= r < self.modulus for r in self.members):
            raise ValueError("residue outside [0, modulus)")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, r) -> bool:
        return r in self.members


def integer_exponent(rho: Radius, what: str = "radius") -> int:
    if rho.is_zero:
        raise ValueError(f"{what} must be nonzero")
    if rho.exp.denominator != 1:
        raise ValueError(f"{what} {rho} is not in p^Z; balls in Q_p have integer exponents")
    return int(rho.exp)


def ball_residues(center: Scalar, rho: Radius, ctx: PadicContext, level: int) -> ResidueSet:
    """Residues modulo ``p^level`` of the closed ball of radius rho about center."""
    m = -integer_exponent(rho)
    if m < 0:
        raise ValueError("ball radius must be <= 1 for residue enumeration")
    if level < m:
        raise ValueError(f"level {level} is below the ball exponent {m}")
    p = ctx.p
    c = residue(center, ctx, m) if m else 0
    step = p**m
    return ResidueSet(level, p**level, frozenset(range(c, p**level, step)))
