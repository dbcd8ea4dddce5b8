import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracwave import (
    CoeffStack,
    GridFunction,
    GridTooCoarseError,
    NormOrder,
    TimeGrid,
    UndefinedRatioError,
    UnsupportedNormError,
    bochner_norm,
    equivalence_ratio,
    h_beta_norm,
    second_derivative_norm,
    sobolev_norm,
)
from fracwave.sobolev import slobodeckij_seminorm_sq

import oracles


def gf(N, f, T=1.0):
    g = TimeGrid(T, N)
    return GridFunction(g, f(g.nodes))


class TestHBetaNorm:
    def test_zero(self):
        assert h_beta_norm(GridFunction.zeros(TimeGrid(1.0, 64)), 0.5) == 0.0

    def test_constant_l2(self):
        v = gf(64, lambda t: np.ones_like(t))
        assert h_beta_norm(v, 0.0) == pytest.approx(1.0, abs=1e-13)

    def test_linear_h_half(self):
        # exact: sqrt(1/3 + 1); criterion asks for 2 percent
        v = gf(1024, lambda t: t)
        assert h_beta_norm(v, 0.5) == pytest.approx(math.sqrt(4.0 / 3.0), rel=0.02)
        assert h_beta_norm(v, 0.5) == pytest.approx(math.sqrt(4.0 / 3.0), rel=1e-4)

    def test_seminorm_against_frozen_references(self):
        grid = TimeGrid(1.0, 2048)
        t = grid.nodes
        cases = [
            (t, 0.25, oracles.SLOB_T1_S025),
            (t**1.5, 0.25, oracles.SLOB_T15_S025),
            (t**2, 0.35, oracles.SLOB_T2_S035),
            (t, 0.5, oracles.SLOB_T1_S05),
        ]
        for vals, sigma, ref in cases:
            got = slobodeckij_seminorm_sq(vals, grid, sigma)
            assert got == pytest.approx(ref, rel=1e-4)

    def test_integer_order_one_explicit(self):
        v = gf(512, lambda t: np.sin(2.0 * np.pi * t))
        grid = v.grid
        d = np.gradient(v.values, grid.h, edge_order=2)
        w = np.full(513, grid.h)
        w[0] = w[-1] = grid.h / 2.0
        explicit = math.sqrt(np.sum(w * v.values**2) + np.sum(w * d**2))
        assert h_beta_norm(v, 1.0) == pytest.approx(explicit, rel=1e-12)

    def test_order_three(self):
        v = gf(256, lambda t: t**3)
        # ||t^3||^2 + ||3t^2||^2 + ||6t||^2 + ||6||^2 = 1/7 + 9/5 + 12 + 36
        ref = math.sqrt(1.0 / 7.0 + 9.0 / 5.0 + 12.0 + 36.0)
        assert h_beta_norm(v, 3.0) == pytest.approx(ref, rel=1e-3)

    def test_divergence_signature_of_power_family(self):
        # t^a lies in H^s only for s < a + 1/2; above that threshold the
        # discrete norm grows like 2^(s - a - 1/2) per doubling
        a = 1.1
        s = 2.5
        rate = 2.0 ** (s - a - 0.5)
        vals = [h_beta_norm(gf(N, lambda t: t**a), s) for N in (256, 512, 1024)]
        assert vals[1] / vals[0] >= 1.5
        assert vals[2] / vals[1] >= 1.5
        assert vals[2] / vals[1] == pytest.approx(rate, rel=0.15)
        # below the threshold the norm settles
        finite = [h_beta_norm(gf(N, lambda t: t**a), 1.5) for N in (256, 512, 1024)]
        assert finite[2] / finite[1] <= 1.05

    def test_validation(self):
        with pytest.raises(UnsupportedNormError):
            NormOrder(3.5)
        with pytest.raises(UnsupportedNormError):
            h_beta_norm(gf(64, lambda t: t), 3.2)
        with pytest.raises(GridTooCoarseError):
            h_beta_norm(GridFunction(TimeGrid(1.0, 4), np.ones(5)), 0.5)


@given(st.floats(min_value=-8.0, max_value=8.0))
def test_homogeneity(c):
    v = gf(128, lambda t: np.sin(np.pi * t) + t)
    n1 = h_beta_norm(c * v, 0.7)
    assert n1 == pytest.approx(abs(c) * h_beta_norm(v, 0.7), rel=1e-12, abs=1e-12)


class TestSecondDerivativeNorm:
    def test_wiring(self):
        v = gf(512, lambda t: np.sin(np.pi * t))
        got = second_derivative_norm(v, 3.2)
        assert got > h_beta_norm(v, 2.0)
        assert sobolev_norm(v, 3.2) == got
        assert sobolev_norm(v, 2.0) == h_beta_norm(v, 2.0)

    def test_range(self):
        v = gf(128, lambda t: t)
        with pytest.raises(UnsupportedNormError):
            second_derivative_norm(v, 2.9)
        with pytest.raises(UnsupportedNormError):
            second_derivative_norm(v, 3.6)


class TestBochner:
    def test_zero_and_single_mode(self):
        z = GridFunction.zeros(TimeGrid(1.0, 64))
        assert bochner_norm(CoeffStack((z,)), 0.5) == 0.0
        v = gf(64, lambda t: t)
        assert bochner_norm(CoeffStack((v,)), 0.5) == h_beta_norm(v, 0.5)

    def test_two_equal_modes(self):
        v = gf(64, lambda t: t)
        n = h_beta_norm(v, 0.5)
        got = bochner_norm(CoeffStack((v, v)), 0.5)
        assert got == pytest.approx(n * math.sqrt(2.0), rel=1e-14)

    def test_monotone_in_modes(self):
        v = gf(64, lambda t: t)
        w = gf(64, lambda t: np.sin(np.pi * t))
        assert bochner_norm(CoeffStack((v, w)), 0.5) >= bochner_norm(CoeffStack((v,)), 0.5)


class TestEquivalenceRatio:
    def test_bands_and_stability(self):
        for f in (lambda t: np.ones_like(t), lambda t: np.sin(np.pi * t)):
            ratios = {}
            for N in (512, 1024, 2048):
                r = equivalence_ratio(gf(N, f), 1.5)
                assert all(0.1 <= v <= 10.0 for v in r)
                ratios[N] = r
            for i in range(3):
                drift = max(ratios[N][i] for N in ratios) / min(ratios[N][i] for N in ratios)
                assert drift <= 1.2

    def test_scaling_invariance_exact(self):
        v = gf(256, lambda t: np.sin(np.pi * t))
        r1 = equivalence_ratio(v, 1.5)
        r2 = equivalence_ratio(2.0 * v, 1.5)
        assert r1 == r2  # power-of-two scaling is exact in floats

    def test_zero_rejected(self):
        with pytest.raises(UndefinedRatioError):
            equivalence_ratio(GridFunction.zeros(TimeGrid(1.0, 64)), 1.5)

    def test_alpha_domain(self):
        with pytest.raises(UnsupportedNormError):
            equivalence_ratio(gf(64, lambda t: t), 2.5)
