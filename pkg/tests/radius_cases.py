"""Clause-by-clause checks of the real radius maps over exponent grids.

Every boundary value ranges over representatives of each branch the case
distinguishes (equal to a threshold, strictly between two, beyond all).
Each case function raises AssertionError on the first violation and
returns the number of clauses it checked.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from padyn.core import ZERO, Radius
from padyn.maps import CaseTag, MapInvariants
from padyn.radius import B, RadiusMapSpec, convergence_steps, radius_step


def R(e) -> Radius:
    return Radius(Fraction(e))


def grid(lo, hi) -> list:
    """Exponents lo..hi in steps of 1/2, plus a few off-lattice ones."""
    pts = {Fraction(k, 2) for k in range(2 * lo, 2 * hi + 1)}
    pts |= {Fraction(lo) + Fraction(1, 7) * k for k in range(7 * (hi - lo))}
    return [R(e) for e in sorted(pts)] + [ZERO]


class Phi:
    def __init__(self, case, alpha, beta, delta, **boundary):
        inv = MapInvariants.from_radii(alpha, beta, delta)
        assert inv.case is case, (case, inv.case)
        self.spec = RadiusMapSpec.from_invariants(
            inv, {B[k]: v for k, v in boundary.items()})
        for kind, value in self.spec.boundary.items():
            assert self.spec.satisfies_bound(kind, value), (kind, value)
        self.checked = 0

    def __call__(self, r):
        return radius_step(self.spec, r)

    def it(self, r, n):
        for _ in range(n):
            r = self(r)
        return r

    def orbit(self, r, n):
        """[r, phi(r), ..., phi^(n-1)(r)]"""
        out = [r]
        for _ in range(n - 1):
            out.append(self(out[-1]))
        return out

    def check(self, cond, *info):
        self.checked += 1
        assert cond, info


def _options(**ranges):
    keys = list(ranges)
    for values in itertools.product(*(ranges[k] for k in keys)):
        yield dict(zip(keys, (R(v) if v is not None else ZERO for v in values)))


def _fixed_set(phi, rs):
    return {r for r in rs if phi(r) == r}


def eq_gt() -> int:
    """alpha = beta > delta."""
    total = 0
    a = R(0)
    for delta, star_opts in ((R(-2), dict(alpha_star=[0, 1, 2, 3], delta_star=[-2, -3])),
                             (ZERO, dict(alpha_star=[0, 1, 3], delta_star=[None]))):
        t = None if delta.is_zero else a * a / delta
        for bv in _options(**star_opts):
            phi = Phi(CaseTag.EQ_gt, a, a, delta, **bv)
            rs = grid(-4, 5)
            want = {r for r in rs if r < a} | ({a} if bv["alpha_star"] == a else set())
            phi.check(_fixed_set(phi, rs) == want, "fix", bv)
            for r in rs:
                if r > a:
                    exp = a * a / r if t is None or r < t else (
                        bv["delta_star"] if r == t else delta)
                    for n in range(1, 5):
                        phi.check(phi.it(r, n) == exp, "part 2", r, n, bv)
            s = bv["alpha_star"]
            if s > a:
                exp = a * a / s if t is None or s < t else (bv["delta_star"] if s == t else delta)
                for n in range(2, 5):
                    phi.check(phi.it(a, n) == exp, "part 3", n, bv)
            total += phi.checked
    return total


def eq_lt() -> int:
    """alpha = beta < delta."""
    total = 0
    a, d = R(0), R(2)
    t = a * a / d
    for bv in _options(alpha_prime=[-2, -3], delta_prime=[2, 3]):
        phi = Phi(CaseTag.EQ_lt, a, a, d, **bv)
        rs = grid(-4, 5)
        want = {r for r in rs if r < t} | {d} | ({t} if bv["alpha_prime"] == t else set())
        phi.check(_fixed_set(phi, rs) == want, "A", bv)
        bare = RadiusMapSpec.from_invariants(MapInvariants.from_radii(a, a, d))
        for r in rs:
            if r > t:
                orbit = phi.orbit(r, 80)
                phi.check(d in orbit, "B reaches delta", r, bv)
                k = orbit.index(d)
                phi.check(all(x == d for x in orbit[k:]), "B stays", r)
                phi.check(k <= convergence_steps(bare, r), "B bound", r)
        if bv["alpha_prime"] < t:
            for n in range(1, 5):
                phi.check(phi.it(t, n) == bv["alpha_prime"], "C", n)
        total += phi.checked
    return total


def eq_eq() -> int:
    """alpha = beta = delta."""
    total = 0
    a = R(0)
    for bv in _options(alpha_hat=[-1, 0, 1]):
        phi = Phi(CaseTag.EQ_eq, a, a, a, **bv)
        rs = grid(-4, 4)
        h = bv["alpha_hat"]
        want = {r for r in rs if r < a} | ({a} if h == a else set())
        phi.check(_fixed_set(phi, rs) == want, "I", bv)
        for r in rs:
            if r > a:
                phi.check(phi(r) == a, "II", r)
        if h < a:
            for n in range(1, 5):
                phi.check(phi.it(a, n) == h, "III.i", n)
        if h > a:
            phi.check(phi.it(a, 2) == a, "III.ii")
        total += phi.checked
    return total


def _beyond_beta(a, b, t, dstar, delta, s):
    """Value of phi^n(s) for n >= 1 once s > beta (delta < alpha < beta)."""
    if t is None or s < t:
        return a * b / s
    return dstar if s == t else delta


def lt_dlt() -> int:
    """delta < alpha < beta."""
    total = 0
    a, b = R(-2), R(0)
    lattice = [-2, -1, 0, Fraction(1, 2), 1, 2]
    for delta, dopts in ((R(-3), [-3, -4]), (ZERO, [None])):
        t = None if delta.is_zero else a * b / delta
        for bv in _options(alpha_star=lattice, beta_star=lattice, delta_star=dopts):
            phi = Phi(CaseTag.LT_dlt, a, b, delta, **bv)
            rs = grid(-4, 3)
            ast, bst = bv["alpha_star"], bv["beta_star"]
            want = ({r for r in rs if r < a} | ({a} if ast == a else set())
                    | ({b} if bst == b else set()))
            phi.check(_fixed_set(phi, rs) == want, "1", bv)
            for r in rs:
                if a < r < b:
                    phi.check(phi(r) == a, "2", r)
                if r > b:
                    exp = _beyond_beta(a, b, t, bv["delta_star"], delta, r)
                    for n in range(1, 5):
                        phi.check(phi.it(r, n) == exp, "3", r, n)
            if a < ast < b:
                phi.check(phi.it(a, 2) == a, "4.1", bv)
            if ast == b:
                phi.check(phi(a) == b, "4.2", bv)
            if ast > b:
                exp = _beyond_beta(a, b, t, bv["delta_star"], delta, ast)
                for n in range(2, 5):
                    phi.check(phi.it(a, n) == exp, "4.3", n, bv)
            if a < bst < b:
                phi.check(phi.it(b, 2) == a, "5.1", bv)
            if bst > b:
                exp = _beyond_beta(a, b, t, bv["delta_star"], delta, bst)
                for n in range(2, 5):
                    phi.check(phi.it(b, n) == exp, "5.2", n, bv)
            total += phi.checked
    return total


def lt_deq() -> int:
    """alpha = delta < beta."""
    total = 0
    a, b = R(-2), R(0)
    for bv in _options(alpha_prime=[-2, -1, 0, 1], beta_prime=[-3, -2, -1, 0, 1]):
        phi = Phi(CaseTag.LT_deq, a, b, a, **bv)
        rs = grid(-4, 3)
        ap, bp = bv["alpha_prime"], bv["beta_prime"]
        want = ({r for r in rs if r < a} | ({a} if ap == a else set())
                | ({b} if bp == b else set()))
        phi.check(_fixed_set(phi, rs) == want, "1", bv)
        for r in rs:
            if r > a and r != b:
                phi.check(phi(r) == a, "2", r)
        if ap > a and ap != b:
            phi.check(phi.it(a, 2) == a, "3.1", bv)
        if ap == b:
            phi.check(phi(a) == b, "3.2", bv)
        if bp < a:
            for n in range(1, 5):
                phi.check(phi.it(b, n) == bp, "4.1", n)
        if bp == a:
            phi.check(phi(b) == a, "4.2")
        if bp > a and bp != b:
            phi.check(phi.it(b, 2) == a, "4.3", bv)
        total += phi.checked
    return total


def lt_mid() -> int:
    """alpha < delta < beta.

    Clause 2 is checked in the form that holds: every orbit from r >= alpha
    either reaches alpha or passes through alpha*beta/delta and then rests at
    delta_hat <= alpha.  The two agree exactly when delta_hat = alpha.
    """
    total = 0
    a, d, b = R(-4), R(-1), R(0)
    t = a * b / d
    for bv in _options(alpha_hat=[-4, Fraction(-7, 2), -3, -2, 0, 1],
                       beta_hat=[-1, Fraction(-1, 2), 0, 1], delta_hat=[-4, -5]):
        phi = Phi(CaseTag.LT_mid, a, b, d, **bv)
        rs = grid(-6, 3)
        ah, bh, dh = bv["alpha_hat"], bv["beta_hat"], bv["delta_hat"]
        want = ({r for r in rs if r < a} | ({a} if ah == a else set())
                | ({b} if bh == b else set()))
        phi.check(_fixed_set(phi, rs) == want, "1", bv)
        if ah not in (a, b) and bh != b:
            for r in rs:
                if r >= a:
                    orbit = phi.orbit(r, 40)[1:]
                    hits_alpha = a in orbit
                    via_t = (r == t or t in orbit) and orbit[-1] == dh
                    phi.check(hits_alpha or via_t, "2", r, bv)
                    if dh == a:
                        phi.check(hits_alpha, "2 with delta_hat = alpha", r, bv)
        if ah == b:
            phi.check(phi(a) == b, "3", bv)
        total += phi.checked
    return total


def lt_mid_counterexample() -> list:
    """Orbit of r = p^1 with delta_hat < alpha: never equals alpha."""
    a, d, b = R(-4), R(-1), R(0)
    phi = Phi(CaseTag.LT_mid, a, b, d, alpha_hat=R(-2), beta_hat=R(1), delta_hat=R(-5))
    return phi.orbit(R(1), 6)


def lt_beta() -> int:
    """alpha < beta = delta."""
    total = 0
    a, b = R(-2), R(0)
    for bv in _options(alpha_bar=[-3, -2, -1, 0, 1], beta_bar=[0, 1]):
        phi = Phi(CaseTag.LT_beta, a, b, b, **bv)
        rs = grid(-4, 3)
        ab, bb = bv["alpha_bar"], bv["beta_bar"]
        want = ({r for r in rs if r < a or a < r < b} | ({a} if ab == a else set())
                | ({b} if bb == b else set()))
        phi.check(_fixed_set(phi, rs) == want, "1", bv)
        for r in rs:
            if r > b:
                phi.check(phi(r) == b, "2", r)
        if ab != a and ab < b:
            for n in range(1, 5):
                phi.check(phi.it(a, n) == ab, "3.1", n, bv)
        if ab == b:
            phi.check(phi(a) == b, "3.2")
        if ab > b:
            phi.check(phi.it(a, 2) == b, "3.3")
        if bb > b:
            phi.check(phi.it(b, 2) == b, "4")
        total += phi.checked
    return total


def lt_bgt() -> int:
    """alpha < beta < delta."""
    total = 0
    a, b, d = R(-2), R(0), R(2)
    t = a * b / d
    bare = RadiusMapSpec.from_invariants(MapInvariants.from_radii(a, b, d))
    for bv in _options(alpha_tilde=[0, 1, 3], beta_tilde=[2, 3], delta_tilde=[-4, -5]):
        phi = Phi(CaseTag.LT_bgt, a, b, d, **bv)
        rs = grid(-6, 4)
        dt = bv["delta_tilde"]
        want = {r for r in rs if r < t} | {d} | ({t} if dt == t else set())
        phi.check(_fixed_set(phi, rs) == want, "1", bv)
        for r in rs:
            if r > t:
                orbit = phi.orbit(r, 80)
                phi.check(d in orbit, "2 reaches delta", r, bv)
                k = orbit.index(d)
                phi.check(all(x == d for x in orbit[k:]), "2 stays", r)
                phi.check(k <= convergence_steps(bare, r), "2 bound", r)
        if dt < t:
            for n in range(1, 5):
                phi.check(phi.it(t, n) == dt, "3", n)
        total += phi.checked
    return total


CASE_CHECKS = {
    "EQ_gt (alpha = beta > delta)": eq_gt,
    "EQ_lt (alpha = beta < delta)": eq_lt,
    "EQ_eq (alpha = beta = delta)": eq_eq,
    "LT_dlt (delta < alpha < beta)": lt_dlt,
    "LT_deq (alpha = delta < beta)": lt_deq,
    "LT_mid (alpha < delta < beta)": lt_mid,
    "LT_beta (alpha < beta = delta)": lt_beta,
    "LT_bgt (alpha < beta < delta)": lt_bgt,
}
