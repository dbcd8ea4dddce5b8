import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fracwave import (
    DomainError,
    GridFunction,
    MlAccuracyWarning,
    MlParams,
    OracleRangeError,
    TimeGrid,
    asym_threshold,
    gamma,
    ml_eval,
    ml_eval_on_grid,
    ml_kernel_integral,
    ml_oracle,
    rgamma,
)
from fracwave.mittag_leffler import SERIES_CONDITION_LIMIT, _branch_integral, _series

import oracles


class TestSeriesRegime:
    def test_value_at_zero_is_reciprocal_gamma(self):
        for a in (0.5, 1.0, 1.3, 1.9):
            for b in (1.0, 2.0, 0.7):
                assert ml_eval(MlParams(a, b), 0.0) == pytest.approx(rgamma(b), rel=1e-14)

    def test_exponential_identity(self):
        p = MlParams(1.0, 1.0)
        xs = np.linspace(-5.0, 1.0, 61)
        vals = ml_eval_on_grid(p, xs)
        rel = np.abs(vals - np.exp(xs)) / np.exp(xs)
        assert np.max(rel) <= 1e-12

    def test_expm1_identity(self):
        # E_{1,2}(z) = (e^z - 1)/z
        assert ml_eval(MlParams(1.0, 2.0), 1.0) == pytest.approx(math.e - 1.0, rel=1e-13)
        assert ml_oracle(MlParams(1.0, 2.0), 1.0) == pytest.approx(math.e - 1.0, rel=1e-13)

    def test_cosine_identity(self):
        assert abs(ml_eval(MlParams(2.0, 1.0), -1.0) - math.cos(1.0)) <= 1e-10

    def test_erfc_identity(self):
        got = ml_eval(MlParams(0.5, 1.0), -1.0)
        assert got == pytest.approx(oracles.E_05_1_AT_M1, rel=1e-10)

    def test_warns_when_conditioning_bites(self):
        with pytest.warns(MlAccuracyWarning):
            ml_eval(MlParams(0.5, 1.0, tol=1e-14), -5.0)


class TestBranches:
    @pytest.mark.parametrize("a", [1.1, 1.3, 1.5, 1.7, 1.9])
    def test_oracle_agreement_to_minus_30(self, a):
        for b in (1.0, 2.0, a):
            p = MlParams(a, b)
            for z in (-0.5, -3.0, -5.0, -8.0, -15.0, -30.0):
                got = ml_eval(p, z)
                ref = ml_oracle(p, z)
                assert got == pytest.approx(ref, rel=1e-10), (a, b, z)

    @pytest.mark.parametrize("a", [1.1, 1.5])
    def test_overlap_band_series_vs_integral(self, a):
        # compare the two branches where the series conditioning permits
        for b in (1.0, a):
            zs = np.linspace(-30.0, -5.0, 26)
            vals_int = _branch_integral(a, b, -zs, 1e-13)
            vals_ser, cond = _series(a, b, zs, 1e-13)
            ok = cond <= SERIES_CONDITION_LIMIT
            assert np.any(ok)
            rel = np.abs(vals_int[ok] - vals_ser[ok]) / np.abs(vals_ser[ok])
            assert np.max(rel) <= 1e-10

    def test_asymptotic_handoff(self):
        for a, b in ((1.1, 1.0), (1.5, 1.5), (1.9, 2.0)):
            xa = asym_threshold(a, b)
            assert math.isfinite(xa) and xa >= 30.0
            p = MlParams(a, b)
            lo = ml_eval(p, -xa * 0.999)
            hi = ml_eval(p, -xa * 1.001)
            assert lo == pytest.approx(hi, rel=1e-6)

    def test_boundedness_on_ladder(self):
        xs = np.logspace(-2, 4, 160)
        for a in (1.1, 1.5, 1.9):
            vals = ml_eval_on_grid(MlParams(a, 1.0), -xs)
            assert np.max(np.abs(vals)) <= 1.1

    def test_monotone_for_alpha_at_most_one(self):
        xs = np.linspace(0.0, 50.0, 300)
        for a in (0.5, 0.8, 1.0):
            vals = ml_eval_on_grid(MlParams(a, 1.0), -xs)
            assert np.all(np.diff(vals) < 0.0)
            assert np.all(vals > 0.0) and vals[0] == 1.0


class TestDomain:
    def test_positive_arguments_capped(self):
        with pytest.raises(DomainError):
            ml_eval(MlParams(1.5, 1.0), 6.0)

    def test_param_validation(self):
        with pytest.raises(DomainError):
            MlParams(0.0, 1.0)
        with pytest.raises(DomainError):
            MlParams(2.5, 1.0)
        with pytest.raises(DomainError):
            MlParams(1.5, 0.0)
        with pytest.raises(DomainError):
            MlParams(1.5, 1.0, tol=1e-16)

    def test_oracle_range(self):
        with pytest.raises(OracleRangeError):
            ml_oracle(MlParams(1.5, 1.0), -51.0)

    def test_alpha_one_deep_branch(self):
        assert ml_eval(MlParams(1.0, 1.0), -40.0) == pytest.approx(math.exp(-40.0), rel=1e-12)
        assert ml_eval(MlParams(1.0, 2.0), -40.0) == pytest.approx(
            -math.expm1(-40.0) / 40.0, rel=1e-12)
        with pytest.raises(DomainError):
            ml_eval(MlParams(1.0, 1.5), -40.0)


@given(st.floats(min_value=0.0, max_value=1e4))
def test_bounded_property(x):
    assert abs(ml_eval(MlParams(1.7, 1.0), -x)) <= 1.1


class TestKernelIntegral:
    def test_zero_forcing(self):
        g = GridFunction.zeros(TimeGrid(1.0, 128))
        out = ml_kernel_integral(1.5, 1.0, g)
        assert np.all(out.values == 0.0)

    def test_lambda_zero_reduces_to_fractional_integral(self):
        # g constant: the weights are exact, result is t^a / Gamma(a+1)
        grid = TimeGrid(1.0, 512)
        g = GridFunction(grid, np.ones(513))
        out = ml_kernel_integral(1.5, 0.0, g)
        ref = grid.nodes**1.5 / gamma(2.5)
        assert np.max(np.abs(out.values - ref)) <= 1e-12
        assert out.values[0] == 0.0

    def test_closed_form_at_t_one(self):
        # int_0^1 s^(a-1) E_{a,a}(-s^a) ds = 1 - E_{a,1}(-1)
        grid = TimeGrid(1.0, 1024)
        g = GridFunction(grid, np.ones(1025))
        out = ml_kernel_integral(1.5, 1.0, g)
        assert out.values[-1] == pytest.approx(1.0 - oracles.E_15_1_AT_M1, abs=1e-4)

    def test_domain(self):
        g = GridFunction.zeros(TimeGrid(1.0, 64))
        with pytest.raises(DomainError):
            ml_kernel_integral(2.5, 1.0, g)
        with pytest.raises(DomainError):
            ml_kernel_integral(1.5, -1.0, g)
