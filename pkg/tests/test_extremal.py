from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from zalcman.extremal import (
    KOEBE,
    CoefficientVector,
    ExtremePoint,
    extreme_coeff,
    is_koebe_rotation,
    j_convexity_remainder,
    rotate,
    sweep_extreme_points,
    torus_functional,
    zalcman_functional,
)
from zalcman.regimes import DomainError, ProblemParams, theorem_bound


class TestExtremePoint:
    def test_diagonal_rejected(self):
        with pytest.raises(DomainError):
            ExtremePoint(1.0, 1.0)
        with pytest.raises(DomainError):
            ExtremePoint(0.0, 2 * math.pi)

    def test_normalized(self):
        p = ExtremePoint(-math.pi / 2, 7.0)
        assert 0 <= p.s < 2 * math.pi and 0 <= p.t < 2 * math.pi
        assert p.s == pytest.approx(3 * math.pi / 2)


class TestExtremeCoeff:
    def test_koebe_is_k(self):
        for k in range(2, 51):
            assert extreme_coeff(KOEBE, k) == pytest.approx(k, abs=1e-12 * k)

    def test_rotated_koebe(self):
        p = ExtremePoint(0.0, math.pi)
        for k in range(2, 20):
            assert extreme_coeff(p, k) == pytest.approx((-1) ** (k - 1) * k, abs=1e-12 * k)

    def test_hand_value(self):
        assert extreme_coeff(ExtremePoint(math.pi / 2, 0.0), 3) == pytest.approx(2 - 1j, abs=1e-15)

    def test_k_below_two_rejected(self):
        with pytest.raises(DomainError):
            extreme_coeff(KOEBE, 1)

    def test_matches_series_formula(self):
        s, t = 0.7, 2.3
        x, y = cmath.exp(1j * s), cmath.exp(1j * t)
        for k in range(2, 12):
            want = (k + 1) / 2 * y ** (k - 1) - (k - 1) / 2 * x * y ** (k - 2)
            assert extreme_coeff(ExtremePoint(s, t), k) == pytest.approx(want, abs=1e-13)


class TestCoefficientVector:
    def test_a1_must_be_one(self):
        with pytest.raises(DomainError):
            CoefficientVector((2.0, 1.0))

    def test_one_based(self):
        c = CoefficientVector.koebe(5)
        assert c[1] == 1 and c[5] == 5
        with pytest.raises(DomainError):
            c[6]


class TestZalcmanFunctional:
    def test_koebe_n3(self):
        v = zalcman_functional(CoefficientVector.koebe(5), ProblemParams(3, 1.0))
        assert v.z_complex == 4 and v.z_modulus == 4

    def test_koebe_n4_lambda2(self):
        v = zalcman_functional(CoefficientVector.koebe(7), ProblemParams(4, 2.0))
        assert v.z_complex == 25 and v.z_modulus == 25

    def test_identity_is_zero(self):
        for n, lam in [(3, 1.0), (7, 0.3)]:
            v = zalcman_functional(CoefficientVector.identity(2 * n - 1), ProblemParams(n, lam))
            assert v.z_complex == 0

    def test_short_vector_rejected(self):
        with pytest.raises(DomainError):
            zalcman_functional(CoefficientVector.koebe(4), ProblemParams(3, 1.0))


class TestRotate:
    def test_koebe_by_pi(self):
        r = rotate(CoefficientVector.koebe(9), math.pi)
        for k in range(1, 10):
            assert r[k] == pytest.approx((-1) ** (k - 1) * k, abs=1e-12)

    def test_zero_angle(self):
        c = CoefficientVector.from_extreme_point(ExtremePoint(0.3, 1.9), 7)
        assert rotate(c, 0.0) == c

    def test_modulus_preserved(self):
        c = CoefficientVector.from_extreme_point(ExtremePoint(0.3, 1.9), 7)
        p = ProblemParams(4, 0.77)
        for th in np.linspace(0, 2 * math.pi, 13):
            assert zalcman_functional(rotate(c, th), p).z_modulus == pytest.approx(
                zalcman_functional(c, p).z_modulus, abs=1e-12
            )


class TestConvexityRemainder:
    def test_examples(self):
        assert j_convexity_remainder(2, 2, 0.5, 1) == 0
        assert j_convexity_remainder(3, 1, 0.5, 1) == 1
        assert j_convexity_remainder(3, 1, 0.25, 2) == 1.5

    def test_matches_mixed_vectors(self):
        n, lam, t = 3, 2.0, 0.25
        p = ProblemParams(n, lam)
        g = CoefficientVector.from_extreme_point(ExtremePoint(0.4, 2.2), 5)
        h = CoefficientVector.from_extreme_point(ExtremePoint(5.0, 1.1), 5)
        J = lambda c: zalcman_functional(c, p).j_value
        rem = j_convexity_remainder(g[n].real, h[n].real, t, lam)
        assert J(g.mix(h, t)) == pytest.approx(t * J(g) + (1 - t) * J(h) - rem, abs=1e-12)

    def test_bad_t(self):
        with pytest.raises(DomainError):
            j_convexity_remainder(1, 2, 1.5, 1)


class TestTorusFunctional:
    def test_diagonal_is_minus_inf(self):
        fn = torus_functional(ProblemParams(3, 1.0))
        assert fn(np.array(1.0), np.array(1.0)) == -np.inf

    def test_unknown_functional(self):
        with pytest.raises(ValueError):
            torus_functional(ProblemParams(3, 1.0), "nope")


class TestSweep:
    def test_large_regime_koebe(self):
        r = sweep_extreme_points(ProblemParams(3, 2.0), 512)
        assert r.max_value == pytest.approx(13, abs=1e-6)
        assert is_koebe_rotation(r.argmax, 3)
        # lexicographically smallest Koebe rotation
        assert (r.argmax.s, r.argmax.t) == pytest.approx((0.0, math.pi), abs=1e-12)

    def test_small_regime_dominated(self):
        r = sweep_extreme_points(ProblemParams(3, 0.5), 512)
        assert r.max_value <= 5 + 1e-6

    def test_extreme_point_max_at_lambda_one_is_koebe_value(self):
        # Over extreme points the real part peaks at the Koebe value (n-1)^2 = 4
        r = sweep_extreme_points(ProblemParams(3, 1.0), 1024)
        assert r.max_value == pytest.approx(4.0, abs=1e-9)

    def test_j_sweep_reaches_bound(self):
        p = ProblemParams(3, 1.0)
        r = sweep_extreme_points(p, 512, "j")
        assert r.max_value == pytest.approx(theorem_bound(p), abs=1e-9)

    @pytest.mark.parametrize("n, lam", [(9, 0.24992171279953643), (9, 0.2471999320005391), (11, 0.19877583015534273)])
    def test_j_sweep_finds_crest_narrower_than_lattice(self, n, lam):
        # just above the lower threshold the J maximum sits on a ridge ~1e-4 wide,
        # well below the lattice spacing, and only ~1e-5 above the Koebe value 2n-1
        p = ProblemParams(n, lam)
        r = sweep_extreme_points(p, 512, "j")
        assert r.max_value > 2 * n - 1
        assert r.max_value == pytest.approx(theorem_bound(p), rel=1e-9)

    def test_history_monotone(self):
        r = sweep_extreme_points(ProblemParams(5, 0.9), 256, "j")
        assert all(a <= b for a, b in zip(r.history, r.history[1:]))

    def test_workers_do_not_change_result(self):
        p = ProblemParams(4, 0.83)
        assert sweep_extreme_points(p, 256, workers=1) == sweep_extreme_points(p, 256, workers=4)

    def test_grid_too_small(self):
        with pytest.raises(DomainError):
            sweep_extreme_points(ProblemParams(3, 1.0), 4)


def test_koebe_rotation_detector():
    assert is_koebe_rotation(KOEBE, 3)
    assert is_koebe_rotation(ExtremePoint(0.0, math.pi), 3)
    assert not is_koebe_rotation(ExtremePoint(0.1, math.pi), 3)
