"""Polynomial interpolation, rebasing, and the coupling-tensor collapse."""

from __future__ import annotations

import numpy as np
import numpy.polynomial.polynomial as nppoly
import pytest

from stochnet.chebfit import (
    MAX_DEGREE_1D,
    MAX_DEGREE_2D,
    cheb_fit_1d,
    cheb_fit_2d,
    cheb_nodes,
    collapse_coupling,
)
from stochnet.errors import DegreeTooHigh, InvalidParameter, NonFiniteSample


class TestChebNodes:
    def test_count_and_interval(self):
        nodes = cheb_nodes(0.0, 1.0, 7)
        assert len(nodes) == 7
        assert np.all(nodes > 0.0)
        assert np.all(nodes < 1.0)

    def test_symmetry_about_midpoint(self):
        nodes = cheb_nodes(-2.0, 4.0, 9)
        assert np.allclose(nodes + nodes[::-1], 2.0 * np.ones(9))


class TestFit1D:
    def test_recovers_exact_polynomials(self):
        rng = np.random.default_rng(13)
        for degree in (0, 1, 3, 7, 12):
            coeffs = rng.normal(size=degree + 1)
            fit = cheb_fit_1d(lambda x: nppoly.polyval(x, coeffs), 0.0, 1.0, degree)
            assert fit.max_abs_error < 1e-9
            assert np.allclose(fit.mono_coeffs, coeffs, atol=1e-9)

    def test_domain_rebase(self):
        fit = cheb_fit_1d(lambda x: x * x, 2.0, 5.0, 2)
        assert np.allclose(fit.mono_coeffs, [0.0, 0.0, 1.0], atol=1e-10)

    def test_callable_evaluates_fit(self):
        fit = cheb_fit_1d(lambda x: 3.0 + 2.0 * x, 0.0, 1.0, 1)
        assert fit(0.25) == pytest.approx(3.5)

    def test_reports_error_for_non_polynomial(self):
        fit3 = cheb_fit_1d(np.exp, 0.0, 1.0, 3)
        fit6 = cheb_fit_1d(np.exp, 0.0, 1.0, 6)
        assert fit3.max_abs_error > 1e-7
        assert fit6.max_abs_error < fit3.max_abs_error

    def test_degree_cap(self):
        with pytest.raises(DegreeTooHigh):
            cheb_fit_1d(np.exp, 0.0, 1.0, MAX_DEGREE_1D + 1)

    def test_bad_domain_and_degree(self):
        with pytest.raises(InvalidParameter):
            cheb_fit_1d(np.exp, 1.0, 1.0, 2)
        with pytest.raises(InvalidParameter):
            cheb_fit_1d(np.exp, 0.0, 1.0, -1)

    def test_non_finite_sample(self):
        with pytest.raises(NonFiniteSample):
            cheb_fit_1d(lambda x: float("nan"), 0.0, 1.0, 2)


class TestFit2D:
    def test_recovers_exact_tensor_coefficients(self):
        rng = np.random.default_rng(29)
        for P, Q in ((1, 1), (2, 2), (3, 2), (4, 4)):
            d_true = rng.normal(size=(P, Q))
            fit = cheb_fit_2d(
                lambda x, y: float(nppoly.polyval2d(x, y, d_true)), 0.0, 1.0, P, Q
            )
            assert fit.max_abs_error < 1e-9
            assert np.allclose(fit.d_pq, d_true, atol=1e-9)

    def test_product_coupling(self):
        fit = cheb_fit_2d(lambda x, y: x * y, 0.0, 1.0, 2, 2)
        want = np.array([[0.0, 0.0], [0.0, 1.0]])
        assert np.allclose(fit.d_pq, want, atol=1e-11)

    def test_callable_evaluates_fit(self):
        fit = cheb_fit_2d(lambda x, y: x + 2.0 * y, 0.0, 1.0, 2, 2)
        assert fit(0.5, 0.25) == pytest.approx(1.0)

    def test_term_count_caps(self):
        with pytest.raises(DegreeTooHigh):
            cheb_fit_2d(lambda x, y: x * y, 0.0, 1.0, MAX_DEGREE_2D + 1, 2)
        with pytest.raises(DegreeTooHigh):
            cheb_fit_2d(lambda x, y: x * y, 0.0, 1.0, 2, 0)

    def test_non_finite_sample(self):
        with pytest.raises(NonFiniteSample):
            cheb_fit_2d(lambda x, y: float("inf"), 0.0, 1.0, 2, 2)


class TestCollapseCoupling:
    def test_length(self):
        c = collapse_coupling(np.ones((3, 4)))
        assert len(c) == 6

    def test_by_hand(self):
        d = np.array([[1.0, 2.0], [3.0, 4.0]])
        # c_0 = d_00; c_1 = d_01 + d_10; c_2 = d_11
        assert np.array_equal(collapse_coupling(d), [1.0, 5.0, 4.0])

    def test_agrees_with_diagonal_evaluation(self):
        rng = np.random.default_rng(42)
        d = rng.normal(size=(4, 3))
        c = collapse_coupling(d)
        zs = rng.uniform(-1.5, 1.5, 50)
        direct = np.array([float(nppoly.polyval2d(z, z, d)) for z in zs])
        collapsed = nppoly.polyval(zs, c)
        assert np.max(np.abs(direct - collapsed)) < 1e-9

    def test_validation(self):
        with pytest.raises(InvalidParameter):
            collapse_coupling(np.ones(3))
        with pytest.raises(InvalidParameter):
            collapse_coupling(np.array([[np.nan]]))
