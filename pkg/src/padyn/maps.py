"""The (2,2)-rational map family with a unique fixed point.

A general map is ``f(x) = (a x^2 + b x + c) / (x^2 + d x + e)``.  It has a
single (triple) fixed point exactly when it can be written in canonical form

    c = ((a - d)/3)^3,   e = (a - d)^2/3 + b,   x0 = (a - d)/3,

which is what :class:`CanonicalMap` stores.  Orbits are computed exactly for
as long as the rationals stay small and then continued in Q_p with tracked
precision, so every reported distance ``|f^n(x) - x0|_p`` is certain.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .core import (
    PadicContext,
    Radius,
    as_scalar,
    format_scalar,
    hensel_sqrt,
    norm,
    sqrt_exists,
    valuation,
)
from .padic import PadicNumber, PrecisionError, distance_norm

# exact iteration switches to Q_p arithmetic past this many bits of height
EXACT_HEIGHT_BITS = 2048
MAX_PRECISION = 1 << 14


class DegenerateMapError(ValueError):
    pass


@dataclass(frozen=True)
class PoleHit:
    """Marks an orbit point at which the denominator vanishes."""

    at: Fraction

    def __str__(self) -> str:
        return f"pole({format_scalar(self.at)})"


@dataclass(frozen=True)
class GeneralMap:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    e: Fraction
    ctx: PadicContext

    def __post_init__(self):
        for k in "abcde":
            object.__setattr__(self, k, as_scalar(getattr(self, k)))
        if self.a == 0:
            raise DegenerateMapError("leading coefficient a must be nonzero")
        if self.b == self.a * self.d and self.c == self.a * self.e:
            raise DegenerateMapError("b = ad and c = ae: the map is the constant a")


def make_general(a, b, c, d, e, ctx: PadicContext) -> GeneralMap:
    return GeneralMap(a, b, c, d, e, ctx)


def unique_fixed_point(m: GeneralMap) -> Fraction | None:
    """x0 when the fixed-point cubic is ``(x - x0)^3``, else None."""
    x0 = (m.a - m.d) / 3
    if m.c == x0**3 and (m.e - m.b) / 3 == x0**2:
        return x0
    return None


@dataclass(frozen=True)
class CanonicalMap:
    a: Fraction
    b: Fraction
    d: Fraction
    ctx: PadicContext

    def __post_init__(self):
        for k in "abd":
            object.__setattr__(self, k, as_scalar(getattr(self, k)))
        self.general()  # validates non-degeneracy
        if self.denominator(self.x0) == 0:
            # num - x*den = -(x - x0)^3, so a pole at x0 is a common factor
            raise DegenerateMapError("x0 is a root of the denominator; the map has lower degree")

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def x0(self) -> Fraction:
        return (self.a - self.d) / 3

    @property
    def c(self) -> Fraction:
        return self.x0**3

    @property
    def e(self) -> Fraction:
        return (self.a - self.d) ** 2 / 3 + self.b

    @property
    def sigma(self) -> Fraction:
        """``(2a + d)/3``, the sum ``(x0 - x1) + (x0 - x2)``."""
        return (2 * self.a + self.d) / 3

    def general(self) -> GeneralMap:
        return GeneralMap(self.a, self.b, self.c, self.d, self.e, self.ctx)

    def numerator(self, x):
        return (self.a * x + self.b) * x + self.c

    def denominator(self, x):
        return (x + self.d) * x + self.e

    def __str__(self) -> str:
        return (f"f(x) = ({format_scalar(self.a)}x^2 + {format_scalar(self.b)}x + "
                f"{format_scalar(self.c)}) / (x^2 + {format_scalar(self.d)}x + "
                f"{format_scalar(self.e)}) over Q_{self.p}")


def to_canonical(m: GeneralMap) -> CanonicalMap:
    if unique_fixed_point(m) is None:
        raise DegenerateMapError("map does not have a unique fixed point")
    return CanonicalMap(m.a, m.b, m.d, m.ctx)


Value = Union[Fraction, PadicNumber]


def evaluate(m: CanonicalMap, x) -> Value | PoleHit:
    """f(x), exactly for rationals and with tracked precision in Q_p."""
    if isinstance(x, PadicNumber):
        den = m.denominator(x)
        if not den.is_resolved:
            raise PrecisionError("denominator vanishes to working precision")
        return m.numerator(x) / den
    x = as_scalar(x)
    den = m.denominator(x)
    if den == 0:
        return PoleHit(x)
    return m.numerator(x) / den


class CaseTag(enum.Enum):
    EQ_gt = "EQ_gt"      # alpha = beta > delta
    EQ_eq = "EQ_eq"      # alpha = beta = delta
    EQ_lt = "EQ_lt"      # alpha = beta < delta
    LT_dlt = "LT_dlt"    # delta < alpha < beta
    LT_deq = "LT_deq"    # delta = alpha < beta
    LT_mid = "LT_mid"    # alpha < delta < beta
    LT_beta = "LT_beta"  # alpha < beta = delta
    LT_bgt = "LT_bgt"    # alpha < beta < delta


def case_of(alpha: Radius, beta: Radius, delta: Radius) -> CaseTag:
    if alpha > beta:
        raise ValueError("expected alpha <= beta")
    if alpha == beta:
        if alpha > delta:
            return CaseTag.EQ_gt
        return CaseTag.EQ_eq if alpha == delta else CaseTag.EQ_lt
    if delta < alpha:
        return CaseTag.LT_dlt
    if delta == alpha:
        return CaseTag.LT_deq
    if delta < beta:
        return CaseTag.LT_mid
    return CaseTag.LT_beta if delta == beta else CaseTag.LT_bgt


def is_feasible(alpha: Radius, beta: Radius, delta: Radius) -> bool:
    """Whether the radii are compatible with ``(x0-x1) + (x0-x2) = (2a+d)/3``."""
    return delta <= max(alpha, beta) and (alpha == beta or delta == beta)


@dataclass(frozen=True)
class PoleData:
    discriminant: Fraction
    split: bool
    product_norm: Radius
    x1: Fraction | None = None
    x2: Fraction | None = None
    exact: bool = False
    level: int = 0


@dataclass(frozen=True)
class MapInvariants:
    delta: Radius
    alpha: Radius
    beta: Radius
    case: CaseTag
    feasible: bool
    poles: PoleData | None = field(default=None, compare=False)

    @classmethod
    def from_radii(cls, alpha: Radius, beta: Radius, delta: Radius) -> "MapInvariants":
        """Invariants for abstract radii, without a concrete map behind them."""
        if alpha.is_zero or beta.is_zero:
            raise ValueError("alpha and beta must be positive")
        alpha, beta = min(alpha, beta), max(alpha, beta)
        return cls(delta, alpha, beta, case_of(alpha, beta, delta),
                   is_feasible(alpha, beta, delta))


def _is_rational_square(x: Fraction) -> bool:
    if x < 0:
        return False
    n, d = x.numerator, x.denominator
    return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d


def _rational_sqrt(x: Fraction) -> Fraction:
    return Fraction(math.isqrt(x.numerator), math.isqrt(x.denominator))


def _split_distances(h: Fraction, disc: Fraction, ctx: PadicContext):
    """Norms of ``h - s`` and ``h + s`` where ``s^2 = disc`` and disc is a Q_p square.

    Raises the Hensel precision until both valuations are certain; returns
    the two norms, the root approximation and the level used.
    """
    p = ctx.p
    if disc == 0:
        return norm(h, ctx), norm(h, ctx), Fraction(0), 0
    if _is_rational_square(disc):
        s = _rational_sqrt(disc)
        return norm(h - s, ctx), norm(h + s, ctx), s, 0
    half = valuation(disc, ctx) // 2
    level = ctx.default_level
    while True:
        s = hensel_sqrt(disc, ctx, level)
        # s agrees with a true root to valuation half + level (one digit less at p = 2)
        err = half + level - (1 if p == 2 else 0)
        vm, vp = valuation(h - s, ctx), valuation(h + s, ctx)
        if vm < err and vp < err:
            return Radius(Fraction(-vm)), Radius(Fraction(-vp)), s, level
        if level >= MAX_PRECISION:
            raise PrecisionError("could not resolve root distances")
        level *= 2


def invariants(m: CanonicalMap) -> MapInvariants:
    """delta, alpha <= beta, the case tag and feasibility of a canonical map."""
    ctx = m.ctx
    x0 = m.x0
    delta = norm(m.sigma, ctx)
    disc = m.d**2 / 4 - (m.a - m.d) ** 2 / 3 - m.b
    product = m.denominator(x0)  # = (x0 - x1)(x0 - x2)
    pnorm = norm(product, ctx)
    split = disc == 0 or sqrt_exists(disc, ctx)
    if split:
        # x0 - x_{1,2} = (2a+d)/6 -/+ sqrt(disc)
        h = m.sigma / 2
        r1, r2, s, level = _split_distances(h, disc, ctx)
        exact = disc == 0 or _is_rational_square(disc)
        poles = PoleData(disc, True, pnorm, -m.d / 2 + s, -m.d / 2 - s, exact, level)
        alpha, beta = min(r1, r2), max(r1, r2)
    else:
        # conjugate roots share their norm; their product is the denominator at x0
        poles = PoleData(disc, False, pnorm)
        alpha = beta = pnorm ** Fraction(1, 2)
    return MapInvariants(delta, alpha, beta, case_of(alpha, beta, delta),
                         is_feasible(alpha, beta, delta), poles)


def step_norm_check(m: CanonicalMap, x) -> bool:
    """Exact check of the one-step norm identity at x."""
    x = as_scalar(x)
    ctx = m.ctx
    x0 = m.x0
    if x == x0:
        raise ValueError("x must differ from the fixed point")
    fx = evaluate(m, x)
    if isinstance(fx, PoleHit):
        raise ValueError(f"x = {format_scalar(x)} is a pole of f")
    lhs = norm(fx - x0, ctx) * norm(m.denominator(x), ctx)
    rhs = norm(x - x0, ctx) * norm(m.sigma * (x - x0) + m.denominator(x0), ctx)
    return lhs == rhs


def derivative_at_fixed_point(m: CanonicalMap) -> Fraction:
    x0 = m.x0
    num, den = m.numerator(x0), m.denominator(x0)
    dnum = 2 * m.a * x0 + m.b
    dden = 2 * x0 + m.d
    return (dnum * den - num * dden) / den**2


@dataclass(frozen=True)
class TrajectoryEntry:
    n: int
    value: object  # Fraction, PadicNumber or PoleHit
    distance: Radius

    @property
    def is_pole(self) -> bool:
        return isinstance(self.value, PoleHit)


@dataclass(frozen=True)
class TrajectoryRecord:
    start: Fraction
    entries: tuple

    @property
    def distances(self) -> list:
        return [e.distance for e in self.entries]

    @property
    def hit_pole(self) -> bool:
        return bool(self.entries) and self.entries[-1].is_pole

    @property
    def points(self) -> list:
        return [e.value for e in self.entries if not e.is_pole]


def _height(x: Fraction) -> int:
    return max(x.numerator.bit_length(), x.denominator.bit_length())


def _orbit(m: CanonicalMap, x: Fraction, n_max: int, prec: int) -> list:
    p, x0 = m.p, m.x0
    entries = []
    y: Value = x
    for n in range(n_max + 1):
        if n:
            y = evaluate(m, y)
        if isinstance(y, Fraction):
            if m.denominator(y) == 0:
                entries.append(TrajectoryEntry(n, PoleHit(y), norm(y - x0, p)))
                return entries
            if _height(y) > EXACT_HEIGHT_BITS:
                y = PadicNumber.from_scalar(y, p, prec)
        entries.append(TrajectoryEntry(n, y, distance_norm(y - x0, p)))
    return entries


def iterate(m: CanonicalMap, x, n_max: int, prec: int | None = None) -> TrajectoryRecord:
    """The orbit ``x, f(x), ..., f^n_max(x)`` with certified distances to x0.

    The orbit stops at the first point where the denominator vanishes; that
    entry holds a :class:`PoleHit`.  Once exact heights exceed
    ``EXACT_HEIGHT_BITS`` the orbit continues in Q_p with ``prec`` digits,
    doubled as needed until every distance is resolved.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    x = as_scalar(x)
    prec = prec or max(m.ctx.default_level, 32)
    while True:
        try:
            return TrajectoryRecord(x, tuple(_orbit(m, x, n_max, prec)))
        except PrecisionError:
            if prec >= MAX_PRECISION:
                raise
            prec *= 2


@dataclass(frozen=True)
class PreimageSet:
    """Solutions of ``f(x) = y`` in Q_p.

    ``roots`` holds exact rational solutions; ``approximate`` holds Hensel
    approximations of solutions in Q_p \\ Q.  ``extension`` is set when the
    solutions lie in a quadratic extension; ``distances`` always holds the
    exact norms ``|x - x0|`` of both solutions.
    """

    roots: tuple
    approximate: tuple
    extension: bool
    distances: tuple


def preimages(m: CanonicalMap, y) -> PreimageSet:
    y = as_scalar(y)
    ctx = m.ctx
    if y == m.a:
        raise ValueError("y = a: the preimage equation is not quadratic")
    qa = m.a - y
    qb = m.b - m.d * y
    qc = m.c - y * m.e
    disc = qb * qb - 4 * qa * qc
    x0 = m.x0
    # x - x0 = h -/+ sqrt(disc)/(2 qa)
    h = -qb / (2 * qa) - x0
    shifted = disc / (4 * qa * qa)
    if disc != 0 and not sqrt_exists(disc, ctx):
        r = norm(qc + qb * x0 + qa * x0 * x0, ctx) / norm(qa, ctx)
        r = r ** Fraction(1, 2)
        return PreimageSet((), (), True, (r, r))
    r1, r2, s, _ = _split_distances(h, shifted, ctx)
    cands = (x0 + h - s, x0 + h + s)
    if disc == 0 or _is_rational_square(disc):
        roots = tuple(sorted({c for c in cands if evaluate(m, c) == y}))
        return PreimageSet(roots, (), False, (r1, r2))
    return PreimageSet((), cands, False, (r1, r2))
