"""Real dynamics of the distance to the fixed point.

For a canonical map the distance ``r = |x - x0|_p`` evolves by a piecewise
monomial map of r that depends only on alpha, beta, delta, except on a few
boundary spheres where ``|f(x) - x0|_p`` depends on the point.  This module
implements those eight maps, sphere classification, Siegel radii and the
pole-preimage radii, and checks the predicted distances against orbits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .core import ZERO, Radius
from .maps import (
    CanonicalMap,
    CaseTag,
    MapInvariants,
    PoleHit,
    evaluate,
    invariants,
    iterate,
)
from .padic import distance_norm


class BoundaryKind(enum.Enum):
    alpha_star = "alpha_star"
    beta_star = "beta_star"
    delta_star = "delta_star"
    alpha_prime = "alpha_prime"
    beta_prime = "beta_prime"
    delta_prime = "delta_prime"
    alpha_hat = "alpha_hat"
    beta_hat = "beta_hat"
    delta_hat = "delta_hat"
    alpha_bar = "alpha_bar"
    beta_bar = "beta_bar"
    alpha_tilde = "alpha_tilde"
    beta_tilde = "beta_tilde"
    delta_tilde = "delta_tilde"


B = BoundaryKind


@dataclass(frozen=True)
class PointDependent:
    kind: BoundaryKind

    def __str__(self) -> str:
        return f"point-dependent({self.kind.value})"


@dataclass(frozen=True)
class BoundaryValue:
    kind: BoundaryKind
    value: Radius | None  # None while unresolved


@dataclass(frozen=True)
class Invariant:
    def __str__(self) -> str:
        return "invariant"


@dataclass(frozen=True)
class MapsInto:
    radius: Radius

    def __str__(self) -> str:
        return f"maps into S_{self.radius}"


@dataclass(frozen=True)
class EventuallyFixedAt:
    radius: Radius
    steps: int

    def __str__(self) -> str:
        return f"on S_{self.radius} from step {self.steps}"


@dataclass(frozen=True)
class ConvergesTo:
    radius: Radius
    steps: int

    def __str__(self) -> str:
        return f"reaches S_{self.radius} within {self.steps} steps"


SphereFate = Invariant | MapsInto | EventuallyFixedAt | ConvergesTo | PointDependent


def _ratio(num: Radius, den: Radius) -> Radius | None:
    """num/den, or None standing for +infinity when den is zero."""
    return None if den.is_zero else num / den


@dataclass(frozen=True)
class RadiusMapSpec:
    """One of the piecewise radius maps together with a boundary policy.

    Boundary values come from ``boundary`` when given (abstract study of the
    real map), else from ``fmap`` evaluated at a concrete point; with neither
    a boundary radius yields :class:`PointDependent`.
    """

    case: CaseTag
    alpha: Radius
    beta: Radius
    delta: Radius
    boundary: Mapping[BoundaryKind, Radius] = field(default_factory=dict)
    fmap: CanonicalMap | None = None

    @classmethod
    def from_invariants(cls, inv: MapInvariants, boundary=None, fmap=None) -> "RadiusMapSpec":
        return cls(inv.case, inv.alpha, inv.beta, inv.delta, dict(boundary or {}), fmap)

    @classmethod
    def for_map(cls, m: CanonicalMap) -> "RadiusMapSpec":
        return cls.from_invariants(invariants(m), fmap=m)

    def pieces(self):
        """Breakpoints ``[(radius, kind), ...]`` and the formulas between them."""
        a, b, d = self.alpha, self.beta, self.delta
        c = self.case
        ident = lambda r: r  # noqa: E731
        const = lambda v: (lambda r: v)  # noqa: E731
        if c is CaseTag.EQ_gt:
            t = _ratio(a * a, d)
            if t is None:
                return [(a, B.alpha_star)], [ident, lambda r: a * a / r]
            return ([(a, B.alpha_star), (t, B.delta_star)],
                    [ident, lambda r: a * a / r, const(d)])
        if c is CaseTag.EQ_lt:
            t = a * a / d
            return ([(t, B.alpha_prime), (a, B.delta_prime)],
                    [ident, lambda r: d * r * r / (a * a), const(d)])
        if c is CaseTag.EQ_eq:
            return [(a, B.alpha_hat)], [ident, const(a)]
        if c is CaseTag.LT_dlt:
            t = _ratio(a * b, d)
            if t is None:
                return ([(a, B.alpha_star), (b, B.beta_star)],
                        [ident, const(a), lambda r: a * b / r])
            return ([(a, B.alpha_star), (b, B.beta_star), (t, B.delta_star)],
                    [ident, const(a), lambda r: a * b / r, const(d)])
        if c is CaseTag.LT_deq:
            return [(a, B.alpha_prime), (b, B.beta_prime)], [ident, const(a), const(a)]
        if c is CaseTag.LT_mid:
            t = a * b / d
            return ([(a, B.alpha_hat), (t, B.delta_hat), (b, B.beta_hat)],
                    [ident, const(a), lambda r: d * r / b, const(d)])
        if c is CaseTag.LT_beta:
            return [(a, B.alpha_bar), (b, B.beta_bar)], [ident, ident, const(b)]
        t = a * b / d
        return ([(t, B.delta_tilde), (a, B.alpha_tilde), (b, B.beta_tilde)],
                [ident, lambda r: d * r * r / (a * b), lambda r: d * r / b, const(d)])

    def boundary_kind(self, r: Radius) -> BoundaryKind | None:
        for t, kind in self.pieces()[0]:
            if r == t:
                return kind
        return None

    def bound(self, kind: BoundaryKind) -> tuple[str, Radius]:
        """The defining inequality ``(relation, radius)`` of a boundary value."""
        a, b, d = self.alpha, self.beta, self.delta
        c = self.case
        if c is CaseTag.EQ_gt:
            table = {B.alpha_star: (">=", a), B.delta_star: ("<=", d)}
        elif c is CaseTag.EQ_lt:
            table = {B.alpha_prime: ("<=", a * a / d), B.delta_prime: (">=", d)}
        elif c is CaseTag.EQ_eq:
            table = {B.alpha_hat: (">", ZERO)}
        elif c is CaseTag.LT_dlt:
            table = {B.alpha_star: (">=", a), B.beta_star: (">=", a), B.delta_star: ("<=", d)}
        elif c is CaseTag.LT_deq:
            table = {B.alpha_prime: (">=", a), B.beta_prime: (">", ZERO)}
        elif c is CaseTag.LT_mid:
            table = {B.alpha_hat: (">=", a), B.beta_hat: (">=", d), B.delta_hat: ("<=", a)}
        elif c is CaseTag.LT_beta:
            table = {B.alpha_bar: (">", ZERO), B.beta_bar: (">=", b)}
        else:
            table = {B.alpha_tilde: (">=", a * d / b), B.beta_tilde: (">=", d),
                     B.delta_tilde: ("<=", a * b / d)}
        return table[kind]

    def satisfies_bound(self, kind: BoundaryKind, value: Radius) -> bool:
        rel, r = self.bound(kind)
        return {">=": value >= r, "<=": value <= r, ">": value > r}[rel]


def resolve_boundary(m: CanonicalMap, point) -> Radius:
    """``|f(point) - x0|_p``: the boundary value at a concrete point."""
    fx = evaluate(m, point)
    if isinstance(fx, PoleHit):
        raise ValueError("boundary point is a pole")
    return distance_norm(fx - m.x0, m.p)


def radius_step(spec: RadiusMapSpec, r: Radius, point=None) -> Radius | PointDependent:
    breaks, pieces = spec.pieces()
    for i, (t, kind) in enumerate(breaks):
        if r < t:
            return pieces[i](r)
        if r == t:
            if kind in spec.boundary:
                return spec.boundary[kind]
            if spec.fmap is not None and point is not None:
                return resolve_boundary(spec.fmap, point)
            return PointDependent(kind)
    return pieces[-1](r)


def predict_norm_trajectory(spec: RadiusMapSpec, r: Radius, n: int,
                            orbit: Sequence | None = None) -> list:
    """``[r, step(r), ..., step^n(r)]``, cut short after a :class:`PointDependent`.

    ``orbit[k]`` supplies the concrete point used to resolve a boundary hit
    at step k.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    out = [r]
    for k in range(n):
        point = orbit[k] if orbit is not None and k < len(orbit) else None
        r = radius_step(spec, r, point)
        out.append(r)
        if isinstance(r, PointDependent):
            break
    return out


def siegel_radius(inv: MapInvariants) -> Radius:
    """Radius of the maximal Siegel disk (an open ball about x0)."""
    a, b, d = inv.alpha, inv.beta, inv.delta
    if inv.case is CaseTag.EQ_lt:
        return a * a / d
    if inv.case is CaseTag.LT_bgt:
        return a * b / d
    return a


def _lower_envelope(spec: RadiusMapSpec) -> RadiusMapSpec:
    """The map with every boundary value replaced by its lower bound."""
    lows = {}
    for _, kind in spec.pieces()[0]:
        rel, r = spec.bound(kind)
        if rel == ">=":
            lows[kind] = r
    return RadiusMapSpec(spec.case, spec.alpha, spec.beta, spec.delta, lows)


def convergence_steps(spec: RadiusMapSpec, r: Radius, limit: int = 10_000) -> int:
    """Steps after which every orbit from S_r sits on S_delta (contracting cases).

    Above the lower threshold the radius map is non-decreasing and each
    boundary value is bounded below by the one-sided limit, so orbits
    dominate the orbit of the lower envelope; once that reaches delta one
    more step suffices.
    """
    if spec.case not in (CaseTag.EQ_lt, CaseTag.LT_bgt):
        raise ValueError("convergence bound only for delta above alpha and beta")
    if r == spec.delta:
        return 0
    low = _lower_envelope(spec)
    k, s = 0, r
    while s != spec.delta:
        s = radius_step(low, s)
        k += 1
        if k > limit:
            raise RuntimeError("no convergence within the step limit")
    return k + 1


def classify_sphere(inv: MapInvariants, r: Radius) -> SphereFate:
    """Fate of the sphere ``S_r(x0)`` under the map with these invariants."""
    if r.is_zero:
        raise ValueError("r must be positive")
    spec = RadiusMapSpec.from_invariants(inv)
    case = inv.case
    if r < siegel_radius(inv):
        return Invariant()
    if case is CaseTag.LT_beta and inv.alpha < r < inv.beta:
        return Invariant()
    if case in (CaseTag.EQ_lt, CaseTag.LT_bgt):
        if r == inv.delta:
            return Invariant()
        if r > siegel_radius(inv):
            return ConvergesTo(inv.delta, convergence_steps(spec, r))
    image = radius_step(spec, r)
    if isinstance(image, PointDependent):
        return image
    if radius_step(spec, image) == image:
        return EventuallyFixedAt(image, 1)
    return MapsInto(image)


def pole_radius(inv: MapInvariants, k: int) -> Radius:
    """Radius of the sphere about x0 holding the depth-k pole preimages."""
    if inv.case is not CaseTag.EQ_lt:
        raise ValueError("pole radii are defined for alpha = beta < delta")
    if k < 0:
        raise ValueError("k must be >= 0")
    ea, ed = inv.alpha.exp, inv.delta.exp
    return Radius(ea + (ea - ed) * Fraction(2**k - 1, 2**k))


def _is_pole_radius(inv: MapInvariants, r: Radius) -> bool:
    if r.is_zero:
        return False
    ea, ed = inv.alpha.exp, inv.delta.exp
    # r = r_k  <=>  1 - (e - ea)/(ea - ed) = 2^-k
    q = 1 - (r.exp - ea) / (ea - ed)
    if q <= 0 or q > 1 or q.numerator != 1:
        return False
    den = q.denominator
    return den & (den - 1) == 0


@dataclass(frozen=True)
class PoleSetBound:
    """Radii of spheres that may contain pole preimages.

    ``alpha_side`` bounds the preimages of the pole at distance alpha and
    ``beta_side`` those of the pole at distance beta (the same predicate
    when alpha = beta).
    """

    case: CaseTag
    description: str
    alpha_side: Callable[[Radius], bool]
    beta_side: Callable[[Radius], bool]


def pole_set_bounds(inv: MapInvariants) -> PoleSetBound:
    a, b, d = inv.alpha, inv.beta, inv.delta
    c = inv.case
    if c is CaseTag.EQ_gt:
        f = lambda r: r == a  # noqa: E731
        return PoleSetBound(c, "P in S_alpha", f, f)
    if c is CaseTag.EQ_eq:
        f = lambda r: r >= a  # noqa: E731
        return PoleSetBound(c, "P outside U_alpha", f, f)
    if c is CaseTag.EQ_lt:
        f = lambda r: _is_pole_radius(inv, r)  # noqa: E731
        return PoleSetBound(c, "P_k in S_{r_k}, r_k = alpha (alpha/delta)^((2^k-1)/2^k)", f, f)
    if c is CaseTag.LT_dlt:
        return PoleSetBound(c, "P_alpha in alpha <= r <= beta; P_beta in S_beta",
                            lambda r: a <= r <= b, lambda r: r == b)
    if c in (CaseTag.LT_deq, CaseTag.LT_mid):
        return PoleSetBound(c, "P_alpha in r >= alpha; P_beta in S_beta",
                            lambda r: r >= a, lambda r: r == b)
    if c is CaseTag.LT_beta:
        return PoleSetBound(c, "P_alpha in S_alpha; P_beta in r >= beta",
                            lambda r: r == a, lambda r: r >= b)
    t = a * b / d
    return PoleSetBound(c, "P_alpha in (alpha beta/delta, alpha]; P_beta in (alpha beta/delta, beta]",
                        lambda r: t < r <= a, lambda r: t < r <= b)


@dataclass
class CrosscheckResult:
    point: object
    case: CaseTag
    distances: list
    predicted: list
    boundary_hits: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)
    bound_violations: list = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.mismatches and not self.bound_violations


def crosscheck_trajectory(m: CanonicalMap, x, n: int, spec: RadiusMapSpec | None = None
                          ) -> CrosscheckResult:
    """Compare exact orbit distances with the radius-map prediction.

    Boundary hits are resolved at the current orbit point and the resolved
    value is checked against its defining inequality.
    """
    spec = spec or RadiusMapSpec.for_map(m)
    traj = iterate(m, x, n)
    dist = traj.distances
    points = traj.points
    note = ""
    if traj.hit_pole:
        note = f"orbit reaches a pole at step {len(dist) - 1}; truncated"
        dist = dist[:-1]
    steps = len(dist) - 1
    predicted = predict_norm_trajectory(spec, dist[0], steps, orbit=points) if steps >= 0 else []
    res = CrosscheckResult(x, spec.case, dist, predicted, note=note)
    for k in range(min(len(dist), len(predicted))):
        if predicted[k] != dist[k]:
            res.mismatches.append((k, predicted[k], dist[k]))
        if k + 1 < len(dist):
            kind = spec.boundary_kind(dist[k])
            if kind is not None:
                res.boundary_hits.append((k, BoundaryValue(kind, dist[k + 1])))
                if not spec.satisfies_bound(kind, dist[k + 1]):
                    res.bound_violations.append((k, kind, dist[k + 1]))
    if len(predicted) < len(dist) and not res.mismatches:
        res.mismatches.append((len(predicted), None, dist[len(predicted)]))
    return res
