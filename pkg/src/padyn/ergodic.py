"""Invariant spheres and non-ergodicity of ``f(x) = (ax^2 + bx)/(x^2 + ax + b)`` on Q_p.

Here x0 = 0, ``delta = |a|`` and ``alpha * beta = |b|``.  A sphere ``S_r(0)``
is invariant exactly for r in the set A; on such a sphere f moves every
point by the same distance ``rho(r)`` and maps each closed ball isometrically
onto a ball, so the ball of radius ``rho(r)`` about any point is invariant and
has normalized measure strictly between 0 and 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    PadicContext,
    Radius,
    as_scalar,
    ball_residues,
    format_scalar,
    integer_exponent,
    norm,
    residue,
    sqrt_exists,
)
from .maps import CanonicalMap, MapInvariants, PoleHit, evaluate, invariants, iterate
from .padic import PrecisionError, distance_norm


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    detail: str = ""
    counterexample: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class ErgodicMap:
    a: Fraction
    b: Fraction
    ctx: PadicContext
    canonical: CanonicalMap = field(init=False, repr=False, compare=False)
    inv: MapInvariants = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        a, b = as_scalar(self.a), as_scalar(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if b == 0:
            raise ValueError("b must be nonzero")
        disc = a * a - 4 * b
        if disc != 0 and not sqrt_exists(disc, self.ctx):
            raise ValueError(f"a^2 - 4b = {format_scalar(disc)} is not a square in Q_{self.ctx.p}")
        m = CanonicalMap(a, b, a, self.ctx)
        inv = invariants(m)
        if not inv.feasible:  # pragma: no cover - excluded by the Vieta relation
            raise AssertionError("infeasible invariants for an ergodic-family map")
        object.__setattr__(self, "canonical", m)
        object.__setattr__(self, "inv", inv)

    @property
    def p(self) -> int:
        return self.ctx.p

    @property
    def alpha(self) -> Radius:
        return self.inv.alpha

    @property
    def beta(self) -> Radius:
        return self.inv.beta

    @property
    def delta(self) -> Radius:
        return self.inv.delta

    def __call__(self, x):
        return evaluate(self.canonical, x)


def make_ergodic_map(a, b, ctx: PadicContext) -> ErgodicMap:
    return ErgodicMap(a, b, ctx)


@dataclass(frozen=True)
class InvariantSphereSet:
    """``A1 = [0, alpha)`` when alpha = beta, ``A2 = [0, beta) minus {alpha}`` otherwise."""

    name: str
    alpha: Radius
    beta: Radius

    def __contains__(self, r: Radius) -> bool:
        if self.name == "A1":
            return r < self.alpha
        return r < self.beta and r != self.alpha

    def __str__(self) -> str:
        if self.name == "A1":
            return f"A1 = {{r : 0 <= r < {self.alpha}}}"
        return f"A2 = {{r : 0 <= r < {self.beta}, r != {self.alpha}}}"


def invariant_sphere_set(m: ErgodicMap) -> InvariantSphereSet:
    return InvariantSphereSet("A1" if m.alpha == m.beta else "A2", m.alpha, m.beta)


def _require_in_A(m: ErgodicMap, r: Radius) -> None:
    if r.is_zero:
        raise ValueError("r must be positive")
    if r not in invariant_sphere_set(m):
        raise ValueError(f"S_{r}(0) is not an invariant sphere")


def rho(m: ErgodicMap, r: Radius) -> Radius:
    """The displacement ``|f(c) - c|`` shared by every c on ``S_r(0)``."""
    _require_in_A(m, r)
    if r < m.alpha:
        return r * r * r / (m.alpha * m.beta)
    return r * r / m.beta


def displacements(m: ErgodicMap, c, n_max: int) -> list:
    """``|f^(k+1)(c) - f^k(c)|`` for k = 0..n_max."""
    c = as_scalar(c)
    prec = None
    while True:
        traj = iterate(m.canonical, c, n_max + 1, prec)
        pts = [e.value for e in traj.entries]
        if any(isinstance(v, PoleHit) for v in pts):
            raise ValueError("orbit reaches a pole")
        try:
            return [distance_norm(pts[k + 1] - pts[k], m.p) for k in range(n_max + 1)]
        except PrecisionError:
            prec = 2 * (prec or max(m.ctx.default_level, 32))


def displacement_check(m: ErgodicMap, c, n_max: int) -> CheckResult:
    c = as_scalar(c)
    r = norm(c, m.ctx)
    _require_in_A(m, r)
    target = rho(m, r)
    for k, dist in enumerate(displacements(m, c, n_max)):
        if dist != target:
            return CheckResult(False, f"expected {target}",
                               f"|f^{k + 1}(c) - f^{k}(c)| = {dist} at c = {format_scalar(c)}")
    return CheckResult(True, f"{n_max + 1} displacements equal {target}")


@dataclass(frozen=True)
class BallSpec:
    center: Fraction
    rho: Radius
    sphere: Radius

    def __post_init__(self):
        object.__setattr__(self, "center", as_scalar(self.center))
        integer_exponent(self.rho, "ball radius")
        if self.sphere.is_zero:
            raise ValueError("host sphere radius must be positive")
        if not self.rho < self.sphere:
            raise ValueError("ball radius must be below the sphere radius")

    def to_record(self, p: int) -> dict:
        return {"center": format_scalar(self.center),
                "rho_exp": integer_exponent(self.rho),
                "sphere_exp": integer_exponent(self.sphere, "sphere radius")}


def make_ball(center, rho_: Radius, ctx: PadicContext) -> BallSpec:
    center = as_scalar(center)
    r = norm(center, ctx)
    return BallSpec(center, rho_, r)


def verify_isometry_on_ball(m: ErgodicMap, ball: BallSpec, level: int) -> CheckResult:
    """Enumerate the ball at ``level`` and check that f is an isometry onto ``V_rho(f(c))``.

    Points are ``x = c + p^k t`` for ``t`` in ``[0, p^(level-k))`` where
    ``rho = p^-k``.  The images must satisfy ``|f(x) - f(c)| = |x - c|``
    and their offsets ``(f(x) - f(c)) / p^k`` must hit every residue modulo
    ``p^(level-k)`` once, a finite-level form of measure preservation.
    """
    p = m.p
    if norm(ball.center, m.ctx) != ball.sphere:
        raise ValueError("ball center is not on the host sphere")
    k = -integer_exponent(ball.rho)
    if level < k + 1:
        raise ValueError(f"level must be at least {k + 1}")
    c = ball.center
    fc = m(c)
    if isinstance(fc, PoleHit):
        return CheckResult(False, "center is a pole", format_scalar(c))
    step = Fraction(p) ** k
    width = level - k
    offsets = set()
    images = set()
    want_residues = c.denominator % p != 0 and fc.denominator % p != 0
    for t in range(p**width):
        x = c + step * t
        fx = m(x)
        if isinstance(fx, PoleHit):
            return CheckResult(False, "pole inside the ball", format_scalar(x))
        if norm(fx - fc, m.ctx) != norm(x - c, m.ctx):
            return CheckResult(False, "distance not preserved",
                               f"x = {format_scalar(x)}: |f(x)-f(c)| = {norm(fx - fc, m.ctx)}, "
                               f"|x-c| = {norm(x - c, m.ctx)}")
        offsets.add(residue((fx - fc) / step, m.ctx, width))
        if want_residues:
            images.add(residue(fx, m.ctx, level))
    if len(offsets) != p**width:
        return CheckResult(False, "image residues are not a bijection",
                           f"{len(offsets)} of {p**width} residues hit")
    if want_residues:
        target = ball_residues(fc, ball.rho, m.ctx, level).members
        if images != target:
            return CheckResult(False, "image residue set differs from V_rho(f(c))",
                               f"{len(images ^ target)} residues differ")
    return CheckResult(True, f"{p**width} residues mapped bijectively onto V_{ball.rho}(f(c))")


def minimal_invariant_ball(m: ErgodicMap, c) -> BallSpec:
    c = as_scalar(c)
    r = norm(c, m.ctx)
    return BallSpec(c, rho(m, r), r)


@dataclass(frozen=True)
class MeasureReport:
    """Normalized ball measures: ``mu_paper`` gives ``S_r(0)`` mass r before
    normalizing, ``mu_haar`` uses the Haar mass ``r (1 - 1/p)`` of the sphere."""

    ball: BallSpec
    mu_paper: Fraction
    mu_haar: Fraction


def haar_measure(ball: BallSpec, ctx: PadicContext) -> MeasureReport:
    p = ctx.p
    mu = (ball.rho / ball.sphere).value(p)
    return MeasureReport(ball, mu, mu * p / (p - 1))


def non_ergodicity_witness(m: ErgodicMap, r: Radius) -> tuple[BallSpec, MeasureReport]:
    """An invariant ball of measure strictly between 0 and 1 inside ``S_r(0)``."""
    _require_in_A(m, r)
    e = integer_exponent(r, "sphere radius")
    c = Fraction(m.p) ** (-e)
    ball = minimal_invariant_ball(m, c)
    return ball, haar_measure(ball, m.ctx)


def sphere_samples(m: ErgodicMap, r: Radius, extra: int = 2) -> list:
    """One point ``p^s u`` per unit residue class ``u mod p^extra`` on ``S_r(0)``."""
    s = -integer_exponent(r, "sphere radius")
    base = Fraction(m.p) ** s
    return [base * u for u in range(1, m.p**extra) if u % m.p]


def sphere_invariance(m: ErgodicMap, r: Radius, steps: int, extra: int = 2) -> CheckResult:
    """Whether every sampled point of ``S_r(0)`` stays on it for ``steps`` iterations."""
    leavers = []
    samples = sphere_samples(m, r, extra)
    for c in samples:
        traj = iterate(m.canonical, c, steps)
        for entry in traj.entries:
            if entry.is_pole or entry.distance != r:
                leavers.append(f"c = {format_scalar(c)} leaves at step {entry.n} "
                               f"(distance {entry.distance})")
                break
    if leavers:
        return CheckResult(False, f"{len(leavers)} of {len(samples)} samples leave", leavers[0])
    return CheckResult(True, f"all {len(samples)} samples stay for {steps} steps")
