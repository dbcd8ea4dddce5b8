import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracwave import (
    GridFunction,
    GridTooCoarseError,
    IncompatibleGridsError,
    InvalidInputError,
    TimeGrid,
    inner_product,
    l2_norm,
    sup_norm,
)
from fracwave.grids import diff1, diff2, identity_slice, origin_layer_slice


def test_grid_nodes():
    g = TimeGrid(2.0, 8)
    assert g.h == 0.25
    t = g.nodes
    assert t[0] == 0.0 and t[-1] == 2.0
    assert np.all(np.diff(t) > 0)


def test_grid_validation():
    with pytest.raises(GridTooCoarseError):
        TimeGrid(1.0, 1)
    with pytest.raises(InvalidInputError):
        TimeGrid(-1.0, 8)
    with pytest.raises(InvalidInputError):
        TimeGrid(float("inf"), 8)


def test_gridfunction_validation():
    g = TimeGrid(1.0, 8)
    with pytest.raises(InvalidInputError):
        GridFunction(g, np.ones(8))  # wrong length
    with pytest.raises(InvalidInputError):
        GridFunction(g, np.full(9, np.nan))


def test_gridfunction_is_readonly():
    g = TimeGrid(1.0, 8)
    v = GridFunction.zeros(g)
    with pytest.raises(ValueError):
        v.values[0] = 1.0


def test_arithmetic_and_grid_mismatch():
    g = TimeGrid(1.0, 8)
    u = GridFunction(g, g.nodes)
    v = GridFunction(g, np.ones(9))
    assert np.allclose((u + v).values, g.nodes + 1.0)
    assert np.allclose((2.0 * u - v).values, 2.0 * g.nodes - 1.0)
    other = GridFunction(TimeGrid(1.0, 16), np.ones(17))
    with pytest.raises(IncompatibleGridsError):
        _ = u + other
    with pytest.raises(IncompatibleGridsError):
        inner_product(u, other)


def test_trapezoid_inner_product_exact_on_linears():
    g = TimeGrid(1.0, 64)
    one = GridFunction(g, np.ones(65))
    t = GridFunction(g, g.nodes)
    assert inner_product(one, one) == pytest.approx(1.0, abs=1e-14)
    assert inner_product(one, t) == pytest.approx(0.5, abs=1e-14)
    assert l2_norm(one) == pytest.approx(1.0, abs=1e-14)
    assert sup_norm(t) == 1.0


@given(st.floats(-5, 5), st.floats(-5, 5))
def test_inner_product_bilinear(a, b):
    g = TimeGrid(1.0, 32)
    u = GridFunction(g, np.sin(np.pi * g.nodes))
    v = GridFunction(g, g.nodes**2)
    w = GridFunction(g, np.cos(g.nodes))
    lhs = inner_product(a * u + b * v, w)
    rhs = a * inner_product(u, w) + b * inner_product(v, w)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_finite_differences_exact_on_polynomials():
    g = TimeGrid(1.0, 32)
    t = g.nodes
    assert np.allclose(diff1(2.0 * t + 1.0, g.h), 2.0, atol=1e-12)
    assert np.allclose(diff2(t**2, g.h), 2.0, atol=1e-9)


def test_slices():
    g = TimeGrid(1.0, 64)
    sl = identity_slice(g)
    assert sl.start == 2 and sl.stop == 63
    og = origin_layer_slice(g)
    assert og.start == 4  # 64 // 16
    g2 = TimeGrid(1.0, 16)
    assert origin_layer_slice(g2).start == 2  # floor at the identity margin
