from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from padyn.core import PadicContext, Radius, norm
from padyn.ergodic import (
    BallSpec,
    displacement_check,
    displacements,
    haar_measure,
    invariant_sphere_set,
    make_ball,
    make_ergodic_map,
    minimal_invariant_ball,
    non_ergodicity_witness,
    rho,
    sphere_invariance,
    sphere_samples,
    verify_isometry_on_ball,
)

CTX5 = PadicContext(5)
R = Radius.of
M = make_ergodic_map(1, 25, CTX5)


def test_make_ergodic_map_examples():
    assert (M.alpha, M.beta, M.delta) == (R(-2), R(0), R(0))
    with pytest.raises(ValueError):
        make_ergodic_map(1, 2, CTX5)
    with pytest.raises(ValueError):
        make_ergodic_map(1, 0, CTX5)
    m = make_ergodic_map(1, -6, CTX5)
    assert (m.alpha, m.beta, m.delta) == (R(0), R(0), R(0))
    assert M(5) == Fraction(30, 11)


def test_invariant_sphere_sets():
    A = invariant_sphere_set(M)
    assert A.name == "A2"
    assert [k for k in range(1, 8) if R(-k) in A] == [1, 3, 4, 5, 6, 7]
    assert R(0) not in A and R(-2) not in A
    A1 = invariant_sphere_set(make_ergodic_map(1, -6, CTX5))
    assert A1.name == "A1" and R(-1) in A1 and R(0) not in A1


def test_rho_examples():
    assert rho(M, R(-1)) == R(-2)
    assert rho(M, R(-3)) == R(-7)
    assert norm(M(5) - 5, CTX5) == R(-2)
    assert norm(M(125) - 125, CTX5) == R(-7)
    with pytest.raises(ValueError):
        rho(M, R(-2))
    with pytest.raises(ValueError):
        rho(M, R(0))


def test_displacement_examples():
    assert displacement_check(M, 5, 30)
    assert displacement_check(M, 125, 10)
    assert displacements(M, 125, 3) == [R(-7)] * 4
    with pytest.raises(ValueError):
        displacement_check(M, 25, 5)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).filter(lambda k: k != 2), st.integers(1, 5**4).filter(lambda u: u % 5))
def test_displacement_is_point_independent(k, u):
    c = Fraction(5**k * u)
    assert norm(M(c) - c, CTX5) == rho(M, R(-k))


def test_isometry_examples():
    ball = minimal_invariant_ball(M, 5)
    assert ball == BallSpec(Fraction(5), R(-2), R(-1))
    res = verify_isometry_on_ball(M, ball, 5)
    assert res, res.counterexample
    assert "125" in res.detail
    assert oracles.residue(Fraction(30, 11), 5, 2) == 5
    assert verify_isometry_on_ball(M, minimal_invariant_ball(M, 125), 8)
    with pytest.raises(ValueError):
        verify_isometry_on_ball(M, ball, 2)
    with pytest.raises(ValueError):
        BallSpec(Fraction(5), R(-1), R(-1))
    with pytest.raises(ValueError):
        minimal_invariant_ball(M, 25)


def test_isometry_fails_off_invariant_spheres():
    # above beta the map contracts: |f(x) - f(c)| = |x - c| / 25 on S_5(0)
    ball = make_ball(Fraction(1, 5), R(-1), CTX5)
    res = verify_isometry_on_ball(M, ball, 3)
    assert not res
    assert res.counterexample.startswith("x = 26/5")


def test_haar_measure():
    meas = haar_measure(BallSpec(Fraction(5), R(-2), R(-1)), CTX5)
    assert meas.mu_paper == Fraction(1, 5)
    assert meas.mu_haar == Fraction(1, 4)
    for p in (2, 3, 7):
        ctx = PadicContext(p)
        assert haar_measure(BallSpec(Fraction(p), R(-2), R(-1)), ctx).mu_paper == Fraction(1, p)


def test_non_ergodicity_witness_examples():
    ball, meas = non_ergodicity_witness(M, R(-1))
    assert ball == BallSpec(Fraction(5), R(-2), R(-1))
    assert meas.mu_paper == Fraction(1, 5)
    ball, meas = non_ergodicity_witness(M, R(-3))
    assert meas.mu_paper == Fraction(1, 625)
    with pytest.raises(ValueError):
        non_ergodicity_witness(M, R(0))


def test_sphere_samples_cover_residues():
    pts = sphere_samples(M, R(-1))
    assert len(pts) == 20
    assert {int(x) % 125 for x in pts} == {t for t in range(125) if t % 25 and t % 5 == 0}


def test_sphere_invariance():
    assert sphere_invariance(M, R(-1), 20)
    assert sphere_invariance(M, R(-3), 20)
    assert not sphere_invariance(M, R(1), 5)
