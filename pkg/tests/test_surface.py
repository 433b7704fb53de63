from __future__ import annotations

import math

import numpy as np
import pytest

from zalcman import surface as S
from zalcman.regimes import ProblemParams, RegimeError, thresholds

SQRT3 = math.sqrt(3)


def P(n, lam):
    return ProblemParams(n, lam)


class TestEvalF:
    @pytest.mark.parametrize("n,lam", [(3, 1.0), (5, 0.2), (9, 1.9)])
    def test_origin(self, n, lam):
        assert S.eval_F(P(n, lam), 0.0, 0.0) == 4 * (n - 1)

    @pytest.mark.parametrize("n,lam", [(3, 1.0), (5, 0.2), (9, 1.9)])
    def test_corners(self, n, lam):
        p = P(n, lam)
        assert S.eval_F(p, 1.0, -1.0) == pytest.approx(4 * lam * n * n - 12 * n + 4, abs=1e-12)
        assert S.eval_F(p, 1.0, 1.0) == pytest.approx(4 * (lam - n - 1), abs=1e-12)

    def test_outside_square_rejected(self):
        with pytest.raises(S.DomainError):
            S.eval_F(P(3, 1.0), 1.1, 0.0)

    def test_vectorized(self):
        u = np.linspace(-1, 1, 7)
        out = S.eval_F(P(3, 1.0), u, u[::-1])
        assert out.shape == (7,)


class TestEvalG:
    def test_case_lambda_2_over_n_plus_1(self):
        assert S.eval_G(P(3, 0.5), 1.0, 1.0) == pytest.approx(-22, abs=1e-12)

    def test_case_lambda_small_max(self):
        # factored form -(4/7)(5u + v)^2; at (1, -1) that is -(4/7) * 16
        assert S.eval_G(P(3, 6 / 7), 1.0, -1.0) == pytest.approx(-64 / 7, abs=1e-12)
        u = np.linspace(-1, 1, 101)
        U, V = np.meshgrid(u, u, indexing="ij")
        np.testing.assert_allclose(S.eval_G(P(3, 6 / 7), U, V), -(4 / 7) * (5 * U + V) ** 2, atol=1e-12)

    @pytest.mark.parametrize("n,lam", [(3, 2.0), (6, 0.7)])
    def test_corner(self, n, lam):
        assert S.eval_G(P(n, lam), 1.0, -1.0) == pytest.approx(4 * lam * n * n - 16 * n + 8, abs=1e-12)

    def test_split_form_agrees(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            p = P(int(rng.integers(3, 40)), rng.uniform(0.01, 3))
            u, v = rng.uniform(-1, 1, 2)
            assert S.eval_G_split(p, u, v) == pytest.approx(S.eval_G(p, u, v), abs=1e-12 * p.n**2)


class TestGradient:
    def test_origin(self):
        assert S.gradient_F(P(3, 1.0), 0.0, 0.0) == (0.0, 0.0)

    def test_boundary_rejected(self):
        with pytest.raises(S.BoundaryError):
            S.gradient_F(P(3, 1.0), 1.0, 0.2)

    def test_near_critical_point(self):
        assert S.gradient_residual(P(3, 1.0), 0.2588, -0.7071) < 1e-3

    def test_finite_difference(self):
        p, h = P(3, 1.0), 1e-6
        du, dv = S.gradient_F(p, 0.5, 0.5)
        fu = (S.eval_F(p, 0.5 + h, 0.5) - S.eval_F(p, 0.5 - h, 0.5)) / (2 * h)
        fv = (S.eval_F(p, 0.5, 0.5 + h) - S.eval_F(p, 0.5, 0.5 - h)) / (2 * h)
        assert du == pytest.approx(fu, rel=1e-6)
        assert dv == pytest.approx(fv, rel=1e-6)
        assert math.hypot(du, dv) > 0


class TestCriticalPoints:
    def test_n3_lambda1(self):
        cs = S.critical_points(P(3, 1.0))
        assert len(cs.points) == 3
        assert cs.points[0].kind == "Origin"
        assert cs.v2 == pytest.approx(0.5, abs=1e-14)
        assert cs.u2 == pytest.approx((14 - 8 * SQRT3) / (16 - 8 * SQRT3), abs=1e-14)
        assert cs.uv == pytest.approx(-0.18301270189, abs=1e-10)
        first = cs.interior[0]
        # canonical representative: v > 0, sign(u) = sign(uv)
        assert (first.u, first.v) == pytest.approx((-0.2588190451, 0.7071067812), abs=1e-10)
        for q in cs.interior:
            assert q.f_value == pytest.approx(-2 + 6 * SQRT3, abs=1e-12)
            assert q.gradient_residual < 1e-12

    def test_large_regime_origin_only(self):
        cs = S.critical_points(P(3, 1.25))
        assert [q.kind for q in cs.points] == ["Origin"]

    def test_outside_window(self):
        cs = S.critical_points(P(3, 3.0))
        assert len(cs.points) == 1
        assert "outside critical-point window" in cs.regime_note

    @pytest.mark.parametrize("n", range(3, 12))
    def test_pair_flips_at_large_threshold(self, n):
        l2 = thresholds(n).lambda_large_min
        assert len(S.critical_points(P(n, l2 - 1e-7)).points) == 3
        assert len(S.critical_points(P(n, l2 + 1e-7)).points) == 1

    def test_u2_below_v2(self):
        for n in range(3, 12):
            th = thresholds(n)
            for lam in np.linspace(th.lambda_small_max, th.lambda_large_min, 12)[1:-1]:
                cs = S.critical_points(P(n, lam))
                assert cs.u2 < cs.v2


class TestInteriorValue:
    def test_n3_lambda1(self):
        assert S.F_at_interior_critical(P(3, 1.0)) == pytest.approx(-2 + 6 * SQRT3, abs=1e-12)
        assert S.F_at_interior_critical(P(3, 1.0)) > S.eval_F(P(3, 1.0), 0, 0)

    def test_limit_at_small_threshold(self):
        assert S.F_at_interior_critical(P(3, 6 / 7 + 1e-6)) == pytest.approx(8.0, abs=1e-4)

    def test_regime_mismatch(self):
        with pytest.raises(RegimeError):
            S.F_at_interior_critical(P(3, 2.0))

    def test_matches_surface(self):
        for n in (3, 5, 8):
            th = thresholds(n)
            for lam in np.linspace(th.lambda_small_max, th.lambda_large_min, 9)[1:-1]:
                p = P(n, lam)
                q = S.critical_points(p).interior[0]
                assert S.eval_F(p, q.u, q.v) == pytest.approx(S.F_at_interior_critical(p), abs=1e-9)


class TestBoundary:
    def test_Phi_n3(self):
        b = S.boundary_restrictions(P(3, 1.0))
        assert b.Phi_u0 == pytest.approx(-0.5)
        assert b.maxima["Phi"] == pytest.approx((-0.5, 6.0))
        assert b.Phi_at_u0_formula == pytest.approx(6.0)

    def test_Psi_n3(self):
        b = S.boundary_restrictions(P(3, 1.0))
        assert b.maxima["Psi"] == pytest.approx((-1.0, 4.0))
        assert b.Psi(-1.0) == pytest.approx(S.eval_F(P(3, 1.0), 1.0, -1.0))

    def test_psi_interior_vertex(self):
        b = S.boundary_restrictions(P(3, 0.5))
        assert b.psi_v0_interior
        assert b.maxima["psi"][0] == pytest.approx(b.psi_v0)
        assert b.maxima["psi"][1] == pytest.approx(b.psi_at_v0_formula)

    def test_edges_match_surface(self):
        p = P(5, 0.7)
        b = S.boundary_restrictions(p)
        x = np.linspace(-1, 1, 41)
        np.testing.assert_allclose(b.Psi(x), S.eval_F(p, 1.0, x), atol=1e-12)
        np.testing.assert_allclose(b.Phi(x), S.eval_F(p, x, 1.0), atol=1e-12)
        np.testing.assert_allclose(b.psi(x), S.eval_G(p, 1.0, x), atol=1e-12)
        np.testing.assert_allclose(b.phi(x), S.eval_G(p, x, 1.0), atol=1e-12)

    def test_boundary_max_branches(self):
        assert S.boundary_max_F(P(3, 1.0)) == pytest.approx(6.0)
        assert S.boundary_max_F(P(3, 1.2)) == pytest.approx(11.2)
        with pytest.raises(RegimeError):
            S.boundary_max_F(P(3, 0.5))

    def test_branch_gap_identity(self):
        for lam in np.linspace(0.9, 1.3, 9):
            b = S.boundary_restrictions(P(3, lam))
            assert b.Phi_gap_identity <= 0
            assert b.Phi(-1.0) - b.Phi(b.Phi_u0) == pytest.approx(b.Phi_gap_identity, abs=1e-10)


class TestAlgebra:
    def test_discriminant(self):
        assert S.discriminant(P(3, 1.0)).value == 768
        assert S.discriminant(P(3, 2.0)).value == 0
        assert S.discriminant(P(5, 0.5)).value == pytest.approx(3840)
        for n, lam in [(3, 1.0), (5, 0.5), (11, 0.3)]:
            assert S.discriminant(P(n, lam)).rel_error < 1e-6

    def test_cubic_forms_agree(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            p = P(int(rng.integers(3, 50)), rng.uniform(0.01, 2.5))
            e, f = S.cubic_A(p)
            assert e == pytest.approx(f, rel=1e-9, abs=1e-9)
            assert S.cubic_A_definition(p) == pytest.approx(e, rel=1e-9, abs=1e-9)

    def test_cubic_values(self):
        assert S.cubic_A(P(3, 1.5))[1] == 0
        assert S.cubic_A(P(3, 1.0)) == pytest.approx((4.0, 4.0))
        assert S.cubic_A(P(4, 1.0))[1] == pytest.approx(0.0, abs=1e-12)


class TestIdentities:
    def test_symmetry_grid(self):
        u = np.linspace(-1, 1, 101)
        U, V = np.meshgrid(u, u, indexing="ij")
        for p in (P(3, 1.0), P(7, 0.4)):
            np.testing.assert_allclose(S.eval_F(p, U, V), S.eval_F(p, -U, -V), atol=1e-12)
            np.testing.assert_allclose(S.eval_G(p, U, V), S.eval_G(p, -U, -V), atol=1e-12)

    def test_envelope(self):
        u = np.linspace(-1, 1, 51)
        U, V = np.meshgrid(u, u, indexing="ij")
        p = P(4, 0.9)
        F, G = S.eval_F(p, U, V), S.eval_G(p, U, V)
        np.testing.assert_allclose(F - G, S.envelope_gap(p, U, V), atol=1e-12)
        assert np.all(F <= G + 4 * (p.n - 1) + 1e-12)
