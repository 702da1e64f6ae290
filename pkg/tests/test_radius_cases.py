import pytest

import radius_cases
from radius_cases import R


@pytest.mark.parametrize("name", list(radius_cases.CASE_CHECKS))
def test_case_clauses(name):
    assert radius_cases.CASE_CHECKS[name]() > 0


def test_lt_mid_orbit_misses_alpha_when_delta_hat_is_below():
    # p^1 -> delta -> delta r / beta -> alpha beta / delta -> delta_hat, then fixed below alpha
    assert radius_cases.lt_mid_counterexample() == [R(1), R(-1), R(-2), R(-3), R(-5), R(-5)]
