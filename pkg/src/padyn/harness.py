"""Scenario-driven verification runs and report serialization.

A scenario is a flat JSON object.  Rationals are strings such as ``"-1/3"``;
floats are rejected.  The map family is read from the keys present:

* ``a, b, d``: canonical map
* ``a, b, c, d, e``: general map, reduced to canonical form
* ``a, b`` only: the ergodic family ``(ax^2 + bx)/(x^2 + ax + b)``
* ``alpha, beta, delta``: radius exponents only, no concrete map
  (``"delta": "zero"`` for delta = 0)

Other keys: ``prime`` (or ``p``), ``points``, ``steps``, ``level``,
``checks`` (names or ``"all"``) and an optional explicit ``family``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .core import (
    PadicContext,
    Radius,
    as_scalar,
    format_scalar,
    integer_exponent,
    norm,
)
from .ergodic import (
    ErgodicMap,
    displacement_check,
    invariant_sphere_set,
    minimal_invariant_ball,
    non_ergodicity_witness,
    rho,
    sphere_invariance,
    verify_isometry_on_ball,
)
from .maps import (
    CanonicalMap,
    CaseTag,
    MapInvariants,
    PoleHit,
    derivative_at_fixed_point,
    invariants,
    iterate,
    make_general,
    step_norm_check,
    to_canonical,
)
from .padic import PadicNumber
from .radius import (
    ConvergesTo,
    EventuallyFixedAt,
    Invariant,
    MapsInto,
    PointDependent,
    RadiusMapSpec,
    classify_sphere,
    crosscheck_trajectory,
    pole_radius,
    pole_set_bounds,
    radius_step,
    siegel_radius,
)

FAMILIES = ("canonical", "general", "ergodic", "radius")
POINT_CHECKS = ("indifference", "norm_identity", "crosscheck")
ERGODIC_CHECKS = ("invariant_spheres", "displacement", "isometry", "non_ergodicity")
ALL_CHECKS = ("indifference", "feasibility", "norm_identity", "crosscheck",
              "sphere_audit", "siegel", "pole_radii") + ERGODIC_CHECKS
VERIFY_CHECKS = ALL_CHECKS[:7]

PASS, FAIL, SKIPPED, SKIPPED_INFEASIBLE = "pass", "fail", "skipped", "skipped-infeasible"

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

_KEYS = {"family", "prime", "p", "a", "b", "c", "d", "e", "alpha", "beta", "delta",
         "points", "steps", "level", "checks"}


class ScenarioError(ValueError):
    """An invalid scenario (exit code 2)."""


def _scalar(value, key: str) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise ScenarioError(f"{key}: use an integer or a rational string, not {value!r}")
    try:
        return as_scalar(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ScenarioError(f"{key}: cannot read {value!r} as a rational") from exc


def _int(value, key: str) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ScenarioError(f"{key} must be an integer")
    try:
        return int(value)
    except ValueError as exc:
        raise ScenarioError(f"{key} must be an integer") from exc


def _radius_exp(value, key: str) -> Radius:
    if isinstance(value, str) and value.strip().lower() == "zero":
        return Radius(None)
    return Radius(_scalar(value, key))


@dataclass(frozen=True)
class Scenario:
    p: int
    family: str
    coeffs: dict
    points: tuple = ()
    steps: int = 20
    level: int = 5
    checks: tuple = ("all",)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ScenarioError(f"unknown family {self.family!r}")
        if self.steps < 0:
            raise ScenarioError("steps must be >= 0")
        if self.level < 1:
            raise ScenarioError("level must be >= 1")
        unknown = [c for c in self.checks if c != "all" and c not in ALL_CHECKS]
        if unknown:
            raise ScenarioError(f"unknown checks: {', '.join(unknown)}")

    @classmethod
    def from_mapping(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ScenarioError("scenario must be a JSON object")
        extra = set(data) - _KEYS
        if extra:
            raise ScenarioError(f"unknown keys: {', '.join(sorted(extra))}")
        if "prime" not in data and "p" not in data:
            raise ScenarioError("missing prime")
        p = _int(data.get("prime", data.get("p")), "prime")
        family = data.get("family") or _infer_family(data)
        if family == "radius":
            missing = [k for k in ("alpha", "beta", "delta") if k not in data]
            if missing:
                raise ScenarioError(f"missing {', '.join(missing)}")
            coeffs = {k: _radius_exp(data[k], k) for k in ("alpha", "beta", "delta")}
        else:
            need = {"canonical": "abd", "general": "abcde", "ergodic": "ab"}.get(family, "")
            missing = [k for k in need if k not in data]
            if missing:
                raise ScenarioError(f"missing coefficients {', '.join(missing)}")
            coeffs = {k: _scalar(data[k], k) for k in need}
        points = data.get("points", [])
        if not isinstance(points, list):
            raise ScenarioError("points must be a list")
        checks = data.get("checks", ["all"])
        if isinstance(checks, str):
            checks = [checks]
        return cls(
            p=p,
            family=family,
            coeffs=coeffs,
            points=tuple(_scalar(x, "points") for x in points),
            steps=_int(data.get("steps", 20), "steps"),
            level=_int(data.get("level", 5), "level"),
            checks=tuple(checks),
        )

    @classmethod
    def from_json(cls, text: str) -> "Scenario":
        return cls.from_mapping(read_scenario_data(text))

    def echo(self) -> dict:
        if self.family == "radius":
            coeffs = {k: _fmt_exp(v) for k, v in self.coeffs.items()}
        else:
            coeffs = {k: format_scalar(v) for k, v in self.coeffs.items()}
        return {"prime": self.p, "family": self.family, **coeffs,
                "points": [format_scalar(x) for x in self.points],
                "steps": self.steps, "level": self.level, "checks": list(self.checks)}


def _reject_float(s: str):
    raise ScenarioError(f"floating point value {s} is not allowed; use a rational string")


def read_scenario_data(text: str) -> dict:
    """Parse scenario JSON, refusing floats."""
    try:
        data = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    return data


def _infer_family(data: dict) -> str:
    if "alpha" in data or "beta" in data or "delta" in data:
        return "radius"
    if "c" in data or "e" in data:
        return "general"
    if "d" in data:
        return "canonical"
    return "ergodic"


def _fmt_exp(r: Radius) -> str:
    return "zero" if r.is_zero else format_scalar(r.exp)


def parse_map_spec(text: str) -> dict:
    """``"a=1,b=25,d=1"`` -> ``{"a": "1", "b": "25", "d": "1"}``."""
    out = {}
    for part in text.split(","):
        if not part.strip():
            continue
        key, sep, value = part.partition("=")
        if not sep:
            raise ScenarioError(f"bad map term {part!r}; expected key=value")
        out[key.strip()] = value.strip()
    return out


@dataclass
class CheckRecord:
    name: str
    status: str
    details: str = ""
    counterexample: str | None = None

    def __post_init__(self):
        if self.status == FAIL and not self.counterexample:
            raise ValueError(f"failing check {self.name} needs a counterexample")

    def to_dict(self) -> dict:
        d = {"check": self.name, "status": self.status, "details": self.details}
        if self.counterexample is not None:
            d["counterexample"] = self.counterexample
        return d


@dataclass
class VerificationReport:
    scenario: dict
    records: list = field(default_factory=list)
    error: str | None = None
    invariants: dict | None = None
    omitted: list = field(default_factory=list)

    def summary(self) -> dict:
        counts = {PASS: 0, FAIL: 0, SKIPPED: 0, SKIPPED_INFEASIBLE: 0}
        for r in self.records:
            counts[r.status] += 1
        return {"pass": counts[PASS], "fail": counts[FAIL],
                "skipped": counts[SKIPPED] + counts[SKIPPED_INFEASIBLE],
                "error": self.error, "exit_code": self.exit_code}

    @property
    def exit_code(self) -> int:
        if self.error is not None:
            return EXIT_INPUT
        if any(r.status == FAIL for r in self.records):
            return EXIT_FAIL
        return EXIT_OK

    def to_records(self) -> list:
        head = {"record": "scenario", **self.scenario}
        if self.invariants:
            head["invariants"] = self.invariants
        if self.omitted:
            head["omitted"] = self.omitted
        body = [{"record": "check", **r.to_dict()} for r in self.records]
        return [head] + body + [{"record": "summary", **self.summary()}]


# ---------------------------------------------------------------- runs

@dataclass
class _Run:
    scenario: Scenario
    ctx: PadicContext
    inv: MapInvariants
    spec: RadiusMapSpec
    canonical: CanonicalMap | None = None
    ergodic: ErgodicMap | None = None


def build(s: Scenario) -> _Run:
    """Construct the map and its invariants; ValueError on bad input."""
    ctx = PadicContext(s.p)
    k = s.coeffs
    if s.family == "radius":
        inv = MapInvariants.from_radii(k["alpha"], k["beta"], k["delta"])
        return _Run(s, ctx, inv, RadiusMapSpec.from_invariants(inv))
    erg = None
    if s.family == "ergodic":
        erg = ErgodicMap(k["a"], k["b"], ctx)
        m = erg.canonical
    elif s.family == "general":
        m = to_canonical(make_general(k["a"], k["b"], k["c"], k["d"], k["e"], ctx))
    else:
        m = CanonicalMap(k["a"], k["b"], k["d"], ctx)
    if erg is None and m.a == m.d and m.b != 0:
        try:
            erg = ErgodicMap(m.a, m.b, ctx)
        except ValueError:
            erg = None
    inv = erg.inv if erg else invariants(m)
    return _Run(s, ctx, inv, RadiusMapSpec.for_map(m), m, erg)


def _expand_checks(run: _Run) -> tuple[list, list]:
    s = run.scenario
    if "all" not in s.checks:
        return list(dict.fromkeys(s.checks)), []
    wanted, omitted = [], []
    for name in ALL_CHECKS:
        if name in ERGODIC_CHECKS and run.ergodic is None:
            omitted.append(f"{name}: map is not in the ergodic family")
        elif name in POINT_CHECKS and run.canonical is None:
            omitted.append(f"{name}: radius-only scenario"
                           + ("" if run.inv.feasible else " with infeasible case tag"))
        elif name == "pole_radii" and run.inv.case is not CaseTag.EQ_lt:
            omitted.append("pole_radii: only for alpha = beta < delta")
        else:
            wanted.append(name)
    return wanted, omitted


def _vieta_reason(inv: MapInvariants) -> str:
    return (f"case {inv.case.value} violates delta <= max(alpha, beta) and "
            "(alpha < beta => delta = beta); since (x0-x1)+(x0-x2) = (2a+d)/3 no "
            "canonical map realizes it, so point-level checks do not apply")


def run_scenario(s: Scenario) -> VerificationReport:
    report = VerificationReport(s.echo())
    try:
        run = build(s)
    except ValueError as exc:
        report.error = str(exc)
        return report
    inv = run.inv
    report.invariants = {"alpha": str(inv.alpha), "beta": str(inv.beta),
                         "delta": str(inv.delta), "case": inv.case.value,
                         "feasible": inv.feasible}
    wanted, report.omitted = _expand_checks(run)
    for name in wanted:
        report.records.append(_run_check(run, name))
    return report


def _run_check(run: _Run, name: str) -> CheckRecord:
    if name in POINT_CHECKS and run.canonical is None:
        if not run.inv.feasible:
            return CheckRecord(name, SKIPPED_INFEASIBLE, _vieta_reason(run.inv))
        return CheckRecord(name, SKIPPED, "radius-only scenario has no concrete map")
    if name in ERGODIC_CHECKS and run.ergodic is None:
        if not run.inv.feasible:
            return CheckRecord(name, SKIPPED_INFEASIBLE, _vieta_reason(run.inv))
        return CheckRecord(name, SKIPPED, "map is not in the ergodic family")
    return _CHECKS[name](run)


def _check_indifference(run: _Run) -> CheckRecord:
    d = derivative_at_fixed_point(run.canonical)
    if d == 1:
        return CheckRecord("indifference", PASS, "f'(x0) = 1")
    return CheckRecord("indifference", FAIL, "f'(x0) != 1", f"f'(x0) = {format_scalar(d)}")


def _check_feasibility(run: _Run) -> CheckRecord:
    inv = run.inv
    desc = f"alpha={inv.alpha} beta={inv.beta} delta={inv.delta} case={inv.case.value}"
    if inv.feasible:
        return CheckRecord("feasibility", PASS, desc)
    if run.canonical is None:
        return CheckRecord("feasibility", SKIPPED_INFEASIBLE, desc + "; " + _vieta_reason(inv))
    return CheckRecord("feasibility", FAIL, "concrete map with infeasible invariants", desc)


def _usable_points(run: _Run) -> list:
    return [x for x in run.scenario.points if x != run.canonical.x0]


def _check_norm_identity(run: _Run) -> CheckRecord:
    m = run.canonical
    pts = _usable_points(run)
    if not pts:
        return CheckRecord("norm_identity", SKIPPED, "no points other than x0")
    done = 0
    for x in pts:
        if m.denominator(x) == 0:
            continue
        if not step_norm_check(m, x):
            return CheckRecord("norm_identity", FAIL, "identity fails", f"x = {format_scalar(x)}")
        done += 1
    return CheckRecord("norm_identity", PASS, f"{done} points")


def _check_crosscheck(run: _Run) -> CheckRecord:
    m, steps = run.canonical, run.scenario.steps
    pts = _usable_points(run)
    if not pts:
        return CheckRecord("crosscheck", SKIPPED, "no points other than x0")
    hits = 0
    for x in pts:
        res = crosscheck_trajectory(m, x, steps, run.spec)
        hits += len(res.boundary_hits)
        if not res.passed:
            if res.mismatches:
                k, want, got = res.mismatches[0]
                ce = f"x = {format_scalar(x)}, step {k}: predicted {want}, observed {got}"
            else:
                k, kind, got = res.bound_violations[0]
                ce = f"x = {format_scalar(x)}, step {k}: {kind.value} = {got} breaks its bound"
            return CheckRecord("crosscheck", FAIL, "radius prediction differs", ce)
    return CheckRecord("crosscheck", PASS,
                       f"{len(pts)} orbits x {steps} steps, {hits} boundary values resolved")


def exponent_grid(inv: MapInvariants) -> list:
    """Integer exponents around the invariants plus the invariant radii themselves."""
    marks = [inv.alpha, inv.beta, siegel_radius(inv)]
    if not inv.delta.is_zero:
        marks.append(inv.delta)
    exps = [r.exp for r in marks]
    lo, hi = math.floor(min(exps)) - 2, math.ceil(max(exps)) + 2
    grid = {Fraction(e) for e in range(lo, hi + 1)} | set(exps)
    return [Radius(e) for e in sorted(grid)]


def _fate_consistent(run: _Run, r: Radius, fate) -> bool:
    """The fate agrees with the radius map itself."""
    spec = RadiusMapSpec.from_invariants(run.inv)
    img = radius_step(spec, r)
    if isinstance(fate, Invariant):
        return img == r
    if isinstance(fate, MapsInto):
        return img == fate.radius and radius_step(spec, img) != img
    if isinstance(fate, EventuallyFixedAt):
        return img == fate.radius and radius_step(spec, img) == img
    if isinstance(fate, ConvergesTo):
        return fate.radius == run.inv.delta and fate.steps >= 1
    return isinstance(fate, PointDependent) and img == fate


def _may_hold_pole(inv: MapInvariants, r: Radius) -> bool:
    bounds = pole_set_bounds(inv)
    return bounds.alpha_side(r) or bounds.beta_side(r)


def _orbit_agrees(run: _Run, r: Radius, fate, x) -> str | None:
    """None when the orbit of x matches the fate, else a description."""
    steps = max(run.scenario.steps, 1)
    traj = iterate(run.canonical, x, steps)
    if traj.hit_pole:
        at = traj.entries[-1]
        if _may_hold_pole(run.inv, traj.entries[0].distance):
            return None
        return f"x = {format_scalar(x)} reaches a pole at step {at.n}"
    dist = traj.distances
    if isinstance(fate, Invariant):
        bad = [k for k, d in enumerate(dist) if d != r]
    elif isinstance(fate, MapsInto):
        bad = [1] if dist[1] != fate.radius else []
    elif isinstance(fate, EventuallyFixedAt):
        bad = [k for k in range(fate.steps, len(dist)) if dist[k] != fate.radius]
    elif isinstance(fate, ConvergesTo):
        bad = [k for k in range(fate.steps, len(dist)) if dist[k] != fate.radius]
    else:
        return None
    if bad:
        return f"x = {format_scalar(x)}: step {bad[0]} at distance {dist[bad[0]]}, fate {fate}"
    return None


def _sphere_samples(run: _Run, r: Radius) -> list:
    s = -integer_exponent(r)
    base = Fraction(run.ctx.p) ** s
    return [run.canonical.x0 + base * u for u in range(1, run.ctx.p)]


def _check_sphere_audit(run: _Run) -> CheckRecord:
    rows = []
    sampled = 0
    for r in exponent_grid(run.inv):
        fate = classify_sphere(run.inv, r)
        rows.append(f"{r}: {fate}")
        if not _fate_consistent(run, r, fate):
            return CheckRecord("sphere_audit", FAIL, "fate disagrees with the radius map",
                               f"r = {r}: {fate}")
        if run.canonical is None or r.exp.denominator != 1:
            continue
        for x in _sphere_samples(run, r):
            sampled += 1
            problem = _orbit_agrees(run, r, fate, x)
            if problem:
                return CheckRecord("sphere_audit", FAIL, "orbit disagrees with the sphere fate",
                                   problem)
    tail = f"; {sampled} sampled orbits agree" if run.canonical is not None else ""
    return CheckRecord("sphere_audit", PASS, "; ".join(rows) + tail)


def _check_siegel(run: _Run) -> CheckRecord:
    inv = run.inv
    sr = siegel_radius(inv)
    spec = RadiusMapSpec.from_invariants(inv)
    top = math.ceil(sr.exp) - 1
    radii = [Radius(Fraction(e)) for e in range(top, top - 3, -1)]
    for r in radii:
        if radius_step(spec, r) != r:
            return CheckRecord("siegel", FAIL, "radius map moves a sphere inside the disk",
                               f"r = {r}")
    if run.canonical is not None:
        steps = max(run.scenario.steps, 1)
        for r in radii:
            for x in _sphere_samples(run, r):
                traj = iterate(run.canonical, x, steps)
                if traj.hit_pole or any(d != r for d in traj.distances):
                    return CheckRecord("siegel", FAIL, "sphere inside the disk is not invariant",
                                       f"x = {format_scalar(x)} on S_{r}")
    return CheckRecord("siegel", PASS, f"SI(x0) = U_{sr}(x0); spheres {', '.join(map(str, radii))} "
                                       "invariant")


def _check_pole_radii(run: _Run) -> CheckRecord:
    inv = run.inv
    if inv.case is not CaseTag.EQ_lt:
        return CheckRecord("pole_radii", SKIPPED, "pole radii only for alpha = beta < delta")
    spec = RadiusMapSpec.from_invariants(inv)
    limit = inv.alpha * inv.alpha / inv.delta
    prev = None
    for k in range(11):
        r = pole_radius(inv, k)
        s = r
        for _ in range(k):
            s = radius_step(spec, s)
        if s != inv.alpha:
            return CheckRecord("pole_radii", FAIL, "phi^k(r_k) != alpha", f"k = {k}: {s}")
        if prev is not None and not (limit < r < prev):
            return CheckRecord("pole_radii", FAIL, "r_k not decreasing to alpha^2/delta",
                               f"k = {k}: r_k = {r}")
        prev = r
    return CheckRecord("pole_radii", PASS,
                       f"phi^k(r_k) = alpha for k <= 10, r_k decreasing to {limit}")


def _eligible(run: _Run) -> tuple[list, list]:
    """Points whose sphere is invariant, and a note for the rest."""
    erg = run.ergodic
    A = invariant_sphere_set(erg)
    good, notes = [], []
    for c in run.scenario.points:
        r = norm(c, run.ctx)
        if c != 0 and r in A:
            good.append(c)
        else:
            notes.append(f"{format_scalar(c)} (|c| = {r} not in A)")
    return good, notes


def _ergodic_radii(run: _Run) -> tuple[list, list]:
    """A few integer radii inside and outside the invariant set."""
    erg = run.ergodic
    A = invariant_sphere_set(erg)
    ea = math.floor(erg.alpha.exp)
    top = math.ceil(erg.beta.exp) - 1
    inside = [Radius(Fraction(e)) for e in sorted({top, ea - 1, ea - 2}, reverse=True)]
    inside = [r for r in inside if r in A]
    outside = [r for r in (erg.alpha, erg.beta * Radius(Fraction(1)))
               if r.exp.denominator == 1 and r not in A]
    return inside, outside


def _check_invariant_spheres(run: _Run) -> CheckRecord:
    erg, steps = run.ergodic, max(run.scenario.steps, 1)
    inside, outside = _ergodic_radii(run)
    for r in inside:
        res = sphere_invariance(erg, r, steps)
        if not res:
            return CheckRecord("invariant_spheres", FAIL, f"S_{r}(0) should be invariant",
                               res.counterexample)
    left = []
    for r in outside:
        if not sphere_invariance(erg, r, steps):
            left.append(str(r))
    if outside and not left:
        return CheckRecord("invariant_spheres", FAIL, "no sampled point leaves a sphere outside A",
                           ", ".join(map(str, outside)))
    return CheckRecord("invariant_spheres", PASS,
                       f"{invariant_sphere_set(erg)}; invariant: {', '.join(map(str, inside))}; "
                       f"left: {', '.join(left) or 'none tested'}")


def _check_displacement(run: _Run) -> CheckRecord:
    good, notes = _eligible(run)
    if not good:
        return CheckRecord("displacement", SKIPPED, "no point on an invariant sphere")
    for c in good:
        res = displacement_check(run.ergodic, c, run.scenario.steps)
        if not res:
            return CheckRecord("displacement", FAIL, res.detail, res.counterexample)
    skipped = f"; skipped {', '.join(notes)}" if notes else ""
    return CheckRecord("displacement", PASS, f"{len(good)} points, constant rho(|c|){skipped}")


def _check_isometry(run: _Run) -> CheckRecord:
    good, notes = _eligible(run)
    if not good:
        return CheckRecord("isometry", SKIPPED, "no point on an invariant sphere")
    parts = []
    for c in good:
        ball = minimal_invariant_ball(run.ergodic, c)
        level = max(run.scenario.level, -integer_exponent(ball.rho) + 1)
        res = verify_isometry_on_ball(run.ergodic, ball, level)
        if not res:
            return CheckRecord("isometry", FAIL, res.detail, res.counterexample)
        parts.append(f"V_{ball.rho}({format_scalar(c)}) at level {level}")
    return CheckRecord("isometry", PASS, "; ".join(parts))


def _check_non_ergodicity(run: _Run) -> CheckRecord:
    good, _ = _eligible(run)
    erg = run.ergodic
    radii = sorted({norm(c, run.ctx) for c in good}) or _ergodic_radii(run)[0]
    if not radii:
        return CheckRecord("non_ergodicity", SKIPPED, "no invariant sphere with integer radius")
    parts = []
    for r in radii:
        ball, meas = non_ergodicity_witness(erg, r)
        expected = (rho(erg, r) / r).value(erg.p)
        if not (0 < meas.mu_paper < 1 and meas.mu_paper == expected):
            return CheckRecord("non_ergodicity", FAIL, "witness measure out of range",
                               f"r = {r}: mu = {format_scalar(meas.mu_paper)}")
        parts.append(f"S_{r}: ball V_{ball.rho}({format_scalar(ball.center)}) "
                     f"mu = {format_scalar(meas.mu_paper)} (Haar {format_scalar(meas.mu_haar)})")
    return CheckRecord("non_ergodicity", PASS, "; ".join(parts))


_CHECKS: dict[str, Callable[[_Run], CheckRecord]] = {
    "indifference": _check_indifference,
    "feasibility": _check_feasibility,
    "norm_identity": _check_norm_identity,
    "crosscheck": _check_crosscheck,
    "sphere_audit": _check_sphere_audit,
    "siegel": _check_siegel,
    "pole_radii": _check_pole_radii,
    "invariant_spheres": _check_invariant_spheres,
    "displacement": _check_displacement,
    "isometry": _check_isometry,
    "non_ergodicity": _check_non_ergodicity,
}


# ---------------------------------------------------------------- output

def trajectory_rows(traj) -> list:
    """Rows ``{n, value, distance_exp}`` for a trajectory."""
    rows = []
    for e in traj.entries:
        if isinstance(e.value, PoleHit):
            value = f"pole({format_scalar(e.value.at)})"
        elif isinstance(e.value, PadicNumber):
            value = str(e.value)
        else:
            value = format_scalar(e.value)
        rows.append({"n": e.n, "value": value,
                     "distance_exp": "zero" if e.distance.is_zero else format_scalar(e.distance.exp)})
    return rows


FORMATS = ("machine", "table", "csv")


def _plain(v):
    if isinstance(v, Fraction):
        return format_scalar(v)
    if isinstance(v, Radius):
        return str(v)
    return v


def emit(records, fmt: str) -> str:
    """Serialize a report or a list of flat records."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    if isinstance(records, VerificationReport):
        if fmt == "csv":
            raise ValueError("csv output is only for trajectories")
        records = records.to_records()
    records = [{k: _plain(v) for k, v in r.items()} for r in records]
    if fmt == "machine":
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)
    if fmt == "csv":
        if any(set(r) != {"n", "value", "distance_exp"} and set(r) != {"start", "n", "value",
                                                                          "distance_exp"}
               for r in records):
            raise ValueError("csv output is only for trajectories")
        buf = io.StringIO()
        cols = [c for c in ("start", "n", "value", "distance_exp") if records and c in records[0]]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        w.writerows(records)
        return buf.getvalue()
    return _table(records)


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else str(v)


def _table(records: list) -> str:
    """Aligned columns; consecutive records with the same keys share a block."""
    out, block, keys = [], [], None
    for r in records + [None]:
        k = tuple(r) if r is not None else None
        if block and k != keys:
            widths = [max(len(c), *(len(_cell(b[c])) for b in block)) for c in keys]
            out.append("  ".join(c.ljust(w) for c, w in zip(keys, widths)).rstrip())
            for b in block:
                out.append("  ".join(_cell(b[c]).ljust(w) for c, w in zip(keys, widths)).rstrip())
            out.append("")
            block = []
        if r is not None:
            block.append(r)
            keys = k
    return "\n".join(out)
