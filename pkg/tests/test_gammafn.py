import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, strategies as st

from fracwave import DomainError
from fracwave.gammafn import gamma, rgamma


def test_matches_scipy_on_positive_axis():
    xs = np.linspace(0.01, 50.0, 1717)
    rel = [abs(gamma(x) - sp.gamma(x)) / sp.gamma(x) for x in xs]
    assert max(rel) < 1e-13


def test_matches_scipy_at_negative_non_integers():
    xs = [-0.5, -1.5, -2.3, -7.7, -15.5, -24.9]
    for x in xs:
        assert gamma(x) == pytest.approx(float(sp.gamma(x)), rel=1e-12)


def test_integers_are_exact_factorials():
    for n in range(1, 171):
        assert gamma(float(n)) == float(math.factorial(n - 1))


def test_rgamma_zero_at_poles():
    for n in range(0, 30):
        assert rgamma(-float(n)) == 0.0


def test_rgamma_matches_scipy():
    xs = np.concatenate([np.linspace(0.05, 40.0, 301), [-0.5, -3.2, -10.7]])
    for x in xs:
        assert rgamma(x) == pytest.approx(float(sp.rgamma(x)), rel=1e-12, abs=1e-300)


def test_rgamma_one_is_exactly_one():
    assert rgamma(1.0) == 1.0
    assert rgamma(2.0) == 1.0


def test_pole_and_overflow_raise():
    with pytest.raises(DomainError):
        gamma(0.0)
    with pytest.raises(DomainError):
        gamma(-3.0)
    with pytest.raises(DomainError):
        gamma(200.0)
    with pytest.raises(DomainError):
        gamma(float("nan"))


@given(st.floats(min_value=0.5, max_value=50.0))
def test_recurrence(x):
    assert gamma(x + 1.0) == pytest.approx(x * gamma(x), rel=1e-12)
