import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bsgauss.basis import (MAX_ORDER, BasisConfig, gauss_hermite, gaussian_overlap_matrix,
                           hermite_fn, hermite_table, overlap_gaussian, phi2n_zero_sq, phi_zero,
                           scaled_overlap, scaled_overlap_substituted, wang_overlap_sq)
from bsgauss.errors import QuadratureUnderresolved, UnsupportedOrder

PI_M14 = math.pi ** -0.25


class TestHermiteFunctions:
    def test_ground_state_at_origin(self):
        assert hermite_fn(0, 0.0) == pytest.approx(PI_M14, rel=1e-15)
        assert hermite_fn(0, 0.0) == pytest.approx(0.751126, abs=1e-6)

    def test_odd_state_vanishes_at_origin(self):
        assert hermite_fn(1, 0.0) == 0.0

    def test_second_state_matches_explicit_polynomial(self):
        x = np.linspace(-3, 3, 13)
        explicit = PI_M14 / math.sqrt(8.0) * (4 * x * x - 2) * np.exp(-x * x / 2)
        np.testing.assert_allclose(hermite_fn(2, x), explicit, atol=1e-15)
        assert hermite_fn(2, 0.0) == pytest.approx(-0.531126, abs=1e-6)

    def test_positive_leading_coefficient(self):
        # physicists' convention: phi_n(x) > 0 for large positive x
        assert np.all(hermite_table(30, [8.0])[:, 0] > 0)

    def test_orthonormal_under_quadrature(self):
        rule = gauss_hermite(60)
        x = rule.nodes
        tab = hermite_table(40, x) * np.exp(x * x / 2)
        gram = (tab * rule.weights) @ tab.T
        assert np.max(np.abs(gram - np.eye(41))) < 1e-10

    def test_cramer_bound(self):
        x = np.linspace(-25, 25, 4001)
        tab = hermite_table(200, x)
        assert np.max(np.abs(tab)) <= PI_M14 + 1e-12

    def test_high_order_has_no_overflow(self):
        tab = hermite_table(MAX_ORDER, np.linspace(-40, 40, 81))
        assert np.all(np.isfinite(tab))

    def test_order_limit(self):
        with pytest.raises(UnsupportedOrder):
            hermite_fn(MAX_ORDER + 1, 0.0)


class TestOriginValues:
    def test_known_values(self):
        assert phi2n_zero_sq(0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)
        assert phi2n_zero_sq(1) == pytest.approx(1 / (2 * math.sqrt(math.pi)), rel=1e-14)

    def test_matches_recurrence(self):
        tab = hermite_table(200, [0.0])[::2, 0]
        np.testing.assert_allclose(phi2n_zero_sq(np.arange(101)), tab ** 2, rtol=1e-12)
        np.testing.assert_allclose(phi_zero(np.arange(201)), hermite_table(200, [0.0])[:, 0],
                                   atol=1e-14)

    def test_fourth_power_bounds(self):
        # phi_2k(0)^4 <= 1/(pi^2 k), in the three index forms k = n, m + n, m + n + 1
        k = np.arange(1, 2002)
        assert np.all(phi2n_zero_sq(k) ** 2 <= 1.0 / (math.pi ** 2 * k))
        assert phi2n_zero_sq(50) ** 2 <= 1.0 / (math.pi ** 2 * 50)
        m, n = np.meshgrid(np.arange(0, 1001, 7), np.arange(0, 1001, 7))
        s = m + n + 1
        assert np.all(phi2n_zero_sq(s) ** 2 <= 1.0 / (math.pi ** 2 * s))

    def test_large_index_asymptotic(self):
        n = 1e6
        assert phi2n_zero_sq(n) == pytest.approx((1 - 1 / (8 * n)) / (math.pi * math.sqrt(n)),
                                                  rel=1e-11)


class TestGaussianOverlaps:
    rule = gauss_hermite(64)

    def test_examples(self):
        assert overlap_gaussian(0, 0, self.rule) == pytest.approx(1 / math.sqrt(2), rel=1e-14)
        assert overlap_gaussian(0, 1, self.rule) == pytest.approx(0.0, abs=1e-16)
        assert overlap_gaussian(0, 2, self.rule) == pytest.approx(-0.25, rel=1e-14)

    def test_closed_form_examples(self):
        assert wang_overlap_sq(0, 0) == pytest.approx(0.5, rel=1e-15)
        assert wang_overlap_sq(3, 4) == 0.0
        assert wang_overlap_sq(1, 1) == pytest.approx(0.125, rel=1e-14)

    def test_closed_form_equals_quadrature(self):
        m, n = np.meshgrid(np.arange(31), np.arange(31), indexing="ij")
        q = gaussian_overlap_matrix(30, rule=self.rule) ** 2
        w = wang_overlap_sq(m, n)
        even = (m + n) % 2 == 0
        np.testing.assert_allclose(q[even], w[even], rtol=1e-10)
        assert np.all(q[~even] < 1e-28)

    def test_origin_chain(self):
        m, n = np.meshgrid(np.arange(31), np.arange(31), indexing="ij")
        even = (m + n) % 2 == 0
        bound = phi2n_zero_sq((m + n) // 2) ** 2 * math.pi / 2
        assert np.all(wang_overlap_sq(m, n)[even] <= bound[even] * (1 + 1e-12))

    def test_underresolved_rule(self):
        with pytest.raises(QuadratureUnderresolved):
            overlap_gaussian(10, 10, gauss_hermite(21))
        overlap_gaussian(10, 10, gauss_hermite(22))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 30), st.integers(0, 30))
    def test_symmetric_and_matches_closed_form(self, m, n):
        a = overlap_gaussian(m, n, self.rule)
        assert a == overlap_gaussian(n, m, self.rule)
        assert a * a == pytest.approx(wang_overlap_sq(m, n), rel=1e-9, abs=1e-28)


class TestScaledOverlaps:
    def test_examples(self):
        rule = gauss_hermite(40)
        assert scaled_overlap(0, 0, 1, rule) == pytest.approx(1 / math.sqrt(2), rel=1e-14)
        for n in (1, 3, 50):
            assert scaled_overlap(0, 1, n, rule) == pytest.approx(0.0, abs=1e-16)
        assert abs(scaled_overlap(0, 0, 100, rule) - 1.0) < 1e-3

    @pytest.mark.parametrize("n_scale", [1, 2, 10, 100])
    def test_substitution_identity(self, n_scale):
        exact = gauss_hermite(16)
        wide = gauss_hermite(200)
        for l in range(11):
            for m in range(11):
                a = scaled_overlap(l, m, n_scale, exact)
                b = scaled_overlap_substituted(l, m, n_scale, wide)
                assert a == pytest.approx(b, abs=1e-12)

    def test_limit_is_origin_product(self):
        rule = gauss_hermite(20)
        for l, m in [(0, 2), (2, 2), (4, 0)]:
            limit = math.sqrt(math.pi) * phi_zero(l) * phi_zero(m)
            assert scaled_overlap(l, m, 2000, rule) == pytest.approx(limit, abs=2e-5)


class TestQuadratureRule:
    def test_hermite_rule_is_exact_for_moments(self):
        rule = gauss_hermite(20)
        for k in range(0, 39, 2):
            exact = math.gamma((k + 1) / 2)
            assert np.dot(rule.weights, rule.nodes ** k) == pytest.approx(exact, rel=1e-12)

    def test_weights_positive_and_readonly(self):
        rule = gauss_hermite(100)
        assert np.all(rule.weights > 0)
        with pytest.raises(ValueError):
            rule.nodes[0] = 1.0


class TestBasisConfig:
    def test_defaults_valid(self):
        cfg = BasisConfig()
        assert cfg.quad_points >= 2 * cfg.n_modes

    @pytest.mark.parametrize("kwargs", [dict(n_modes=0), dict(n_modes=10, quad_points=19),
                                        dict(tail_tol=0.0), dict(n_modes=2.5, quad_points=10)])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            BasisConfig(**kwargs)

    def test_rejects_unsupported_order(self):
        with pytest.raises(UnsupportedOrder):
            BasisConfig(n_modes=MAX_ORDER + 2, quad_points=2000)
