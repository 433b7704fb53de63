"""Property-based suites; hypothesis runs derandomized (see conftest)."""

from __future__ import annotations

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from zalcman import extremal as E
from zalcman import surface as S
from zalcman.optimize import GridSpec, grid_max
from zalcman.regimes import ProblemParams, Regime, classify, theorem_bound, thresholds

ns = st.integers(3, 40)
lams = st.floats(0.01, 3.0)
unit = st.floats(-1.0, 1.0)
angles = st.floats(0.0, 2 * math.pi, exclude_max=True)
inner = st.floats(-0.999, 0.999)


def params(n, lam):
    return ProblemParams(n, lam)


@given(ns, lams, unit, unit)
def test_symmetry(n, lam, u, v):
    p = params(n, lam)
    scale = max(1.0, abs(S.eval_F(p, u, v)))
    assert abs(S.eval_F(p, u, v) - S.eval_F(p, -u, -v)) <= 1e-12 * scale
    assert abs(S.eval_G(p, u, v) - S.eval_G(p, -u, -v)) <= 1e-12 * max(1.0, abs(S.eval_G(p, u, v)))


@given(ns, lams, unit, unit)
def test_envelope_identity(n, lam, u, v):
    p = params(n, lam)
    F, G = S.eval_F(p, u, v), S.eval_G(p, u, v)
    expect = 2 * (n - 1) * (u * u + v * v + 2 * math.sqrt(1 - u * u) * math.sqrt(1 - v * v))
    assert abs((F - G) - expect) <= 1e-12 * max(1.0, abs(F), abs(G))
    assert F <= G + 4 * (n - 1) + 1e-12 * max(1.0, abs(G))


@given(ns, lams, unit, unit)
def test_G_forms_agree(n, lam, u, v):
    p = params(n, lam)
    g = S.eval_G(p, u, v)
    assert abs(g - S.eval_G_split(p, u, v)) <= 1e-12 * max(1.0, abs(g))


@given(st.integers(3, 15), lams, inner, inner)
def test_gradient_matches_finite_differences(n, lam, u, v):
    p, h = params(n, lam), 1e-6
    du, dv = S.gradient_F(p, u, v)
    fu = (S.eval_F(p, u + h, v) - S.eval_F(p, u - h, v)) / (2 * h)
    fv = (S.eval_F(p, u, v + h) - S.eval_F(p, u, v - h)) / (2 * h)
    # relative to the gradient, floored at the function scale to absorb
    # cancellation where the gradient itself is near zero
    scale = max(math.hypot(du, dv), abs(S.eval_F(p, u, v)), 1.0)
    assert math.hypot(du - fu, dv - fv) <= 1e-6 * scale


@given(st.integers(3, 25), lams, angles, angles, angles)
def test_rotation_invariance(n, lam, s, t, theta):
    if E._same_angle(s, t):
        return
    p = params(n, lam)
    c = E.CoefficientVector.from_extreme_point(E.ExtremePoint(s, t), 2 * n - 1)
    a = E.zalcman_functional(c, p).z_modulus
    b = E.zalcman_functional(E.rotate(c, theta), p).z_modulus
    assert abs(a - b) <= 1e-12 * max(1.0, a)


@given(st.integers(3, 25), lams, angles, angles)
def test_j_dominates_real_part(n, lam, s, t):
    if E._same_angle(s, t):
        return
    c = E.CoefficientVector.from_extreme_point(E.ExtremePoint(s, t), 2 * n - 1)
    v = E.zalcman_functional(c, params(n, lam))
    assert v.j_value >= v.z_complex.real - 1e-12 * max(1.0, abs(v.j_value))


@given(st.integers(3, 12), lams, angles, angles, angles, angles, st.floats(0.0, 1.0))
def test_j_convexity_remainder_identity(n, lam, s1, t1, s2, t2, tm):
    if E._same_angle(s1, t1) or E._same_angle(s2, t2):
        return
    p = params(n, lam)
    g = E.CoefficientVector.from_extreme_point(E.ExtremePoint(s1, t1), 2 * n - 1)
    h = E.CoefficientVector.from_extreme_point(E.ExtremePoint(s2, t2), 2 * n - 1)
    J = lambda c: E.zalcman_functional(c, p).j_value
    rem = E.j_convexity_remainder(g[n].real, h[n].real, tm, lam)
    assert rem >= 0
    lhs = J(g.mix(h, tm))
    rhs = tm * J(g) + (1 - tm) * J(h) - rem
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), lam * n * n)


@given(st.integers(2, 50))
def test_koebe_coefficients(k):
    assert E.extreme_coeff(E.KOEBE, k) == k


@settings(max_examples=25)
@given(st.integers(3, 12), st.floats(0.05, 2.0))
def test_refinement_is_monotone(n, lam):
    p = params(n, lam)
    r = grid_max(lambda U, V: S.eval_F(p, U, V), (-1, 1, -1, 1), GridSpec(64, 6, 8.0))
    assert all(a <= b for a, b in zip(r.history, r.history[1:]))
    assert r.certified_gap >= 0


@settings(max_examples=10)
@given(st.integers(3, 12), st.floats(0.05, 2.0))
def test_grid_max_independent_of_workers(n, lam):
    p = params(n, lam)
    fn = lambda U, V: S.eval_F(p, U, V)
    a = grid_max(fn, (-1, 1, -1, 1), GridSpec(96), slope_bound=S.F_slope_bound(p), workers=1)
    b = grid_max(fn, (-1, 1, -1, 1), GridSpec(96), slope_bound=S.F_slope_bound(p), workers=3)
    assert a == b


@settings(max_examples=10)
@given(st.integers(3, 10), st.floats(0.05, 2.0))
def test_sweep_independent_of_workers(n, lam):
    p = params(n, lam)
    assert E.sweep_extreme_points(p, 64, workers=1) == E.sweep_extreme_points(p, 64, workers=3)


@settings(max_examples=20)
@given(st.integers(3, 10), st.floats(0.05, 2.0))
def test_sweep_dominated_by_bound(n, lam):
    p = params(n, lam)
    assert E.sweep_extreme_points(p, 256).max_value <= theorem_bound(p) + 1e-6


@given(st.integers(3, 60), st.floats(0.0, 1.0, exclude_min=True, exclude_max=True))
def test_middle_regime_critical_points(n, frac):
    th = thresholds(n)
    lam = th.lambda_small_max + frac * (th.lambda_large_min - th.lambda_small_max)
    p = params(n, lam)
    if classify(p) is not Regime.MIDDLE:
        return
    cs = S.critical_points(p)
    if cs.interior:
        q = cs.interior[0]
        assert q.gradient_residual < 1e-8 * max(1.0, n * n)
        assert abs(q.f_value - S.F_at_interior_critical(p)) <= 1e-9 * max(1.0, abs(q.f_value))
        assert q.u * q.v * cs.uv > 0 and q.v > 0


@given(st.integers(3, 200), lams)
def test_regime_partition(n, lam):
    th = thresholds(n)
    r = classify(params(n, lam))
    assert (r is Regime.SMALL) == (lam <= th.lambda_small_max)
    assert (r is Regime.LARGE) == (lam >= th.lambda_large_min)
