"""Numerical checks of each bound ingredient and the full verification run.

Each checker returns a :class:`CheckRecord`. A record collects several
conditions; each condition has a slack (how far it is from being violated,
with its tolerance already added), and the record margin is the smallest
slack. A record passes iff its margin is >= 0.
"""

from __future__ import annotations

import functools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import extremal, surface
from .optimize import GridSpec, edge_max, grid_max, quadratic_slope_bound
from .regimes import (
    N4_STATED_MIDDLE_RANGE,
    ProblemParams,
    Regime,
    RegimeError,
    aux_A,
    aux_B,
    classify,
    corollary_n3,
    corollary_n4,
    large_bound,
    middle_bound,
    small_bound,
    theorem_bound,
    thresholds,
)

TOL_IDENTITY = 1e-12
TOL_ORACLE = 1e-6
TOL_SWEEP = 1e-6
TOL_GRADIENT = 1e-8
TOL_CRITICAL_VALUE = 1e-9
TOL_ARGMAX = 1e-3
NUDGE = 1e-6
LAMBDA_MAX = 2.0
DEFAULT_SEED = 20160217

FLAG_COROLLARY_N4 = (
    "corollary_n4_range_inverted: the n=4 special-case middle clause reads 13/8 < lambda < 1, "
    "an empty interval; the general threshold 2n/(n^2-n+1) gives 8/13. "
    "Computations use 8/13 < lambda < 1."
)
FLAG_INTERIOR_ESTIMATES = (
    "interior_comparison_estimates: the intermediate lower estimates in the interior-vs-boundary "
    "comparison fail at some sampled lambda (see details.proof_estimates); the identities and "
    "the final positivity still hold."
)
FLAG_SWEEP_SHARPNESS = (
    "middle_regime_sweep_informational: the maximum of |lambda a_n^2 - a_{2n-1}| over extreme points "
    "is recorded against the middle-regime bound without asserting sharpness; the convex surrogate J "
    "attains the bound on extreme points."
)


class _Conditions:
    def __init__(self):
        self.items: dict = {}
        self.extra: dict = {}

    def _add(self, name, slack, **info):
        info["slack"] = float(slack)
        self.items[name] = info

    def le(self, name, observed, allowed, tol=0.0):
        self._add(name, allowed + tol - observed, observed=float(observed), allowed=float(allowed), tol=tol)

    def ge(self, name, observed, allowed, tol=0.0):
        self._add(name, observed - allowed + tol, observed=float(observed), allowed=float(allowed), tol=tol)

    def gt(self, name, a, b):
        """Strict a > b; slack is a - b."""
        self._add(name, a - b, observed=float(a), allowed=float(b), tol=0.0, strict=True)

    def close(self, name, a, b, tol, scale=True):
        s = max(1.0, abs(a), abs(b)) if scale else 1.0
        self._add(name, tol * s - abs(a - b), observed=float(a), allowed=float(b), tol=tol * s)

    def true(self, name, flag, **info):
        self._add(name, 1.0 if flag else -1.0, observed=bool(flag), **info)

    def record(self, check_id, n, lam) -> "CheckRecord":
        margin = min((c["slack"] for c in self.items.values()), default=0.0)
        details = {"conditions": self.items}
        details.update(self.extra)
        return CheckRecord(check_id, n, lam, margin >= 0, margin, details)


@dataclass
class CheckRecord:
    check_id: str
    n: int
    lam: Optional[float]
    passed: bool
    margin: float
    details: dict = field(default_factory=dict)
    tolerance: float = 0.0

    def sort_key(self):
        return (self.check_id, self.n, -math.inf if self.lam is None else self.lam)

    def to_line(self) -> str:
        lam = "nan" if self.lam is None else format(self.lam, ".17g")
        return (
            f"check_id={self.check_id} n={self.n} lambda={lam} "
            f"passed={str(self.passed).lower()} margin={format(self.margin, '.17g')}"
        )

    def to_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "n": self.n,
            "lambda": self.lam,
            "passed": self.passed,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "details": self.details,
        }


def _p(n, lam) -> ProblemParams:
    return ProblemParams(n, lam)


def _require(cond, msg):
    if not cond:
        raise RegimeError(msg)


def _nearest(point, targets):
    return min(math.hypot(point[0] - a, point[1] - b) for a, b in targets)


# -- chains --


def check_chain(n: int) -> CheckRecord:
    th = thresholds(n)
    c = _Conditions()
    for name, chain in (("ex5", th.chain_ex5()), ("7a", th.chain_7a()), ("critical", th.chain_critical())):
        for (la, a), (lb, b) in zip(chain, chain[1:]):
            c.gt(f"{name}: {la} < {lb}", b, a)
        c.extra[f"chain_{name}"] = [[lab, val] for lab, val in chain]
    c.gt("A(n) > B(n-1)", th.aux_A, th.aux_B_nminus)
    c.gt("B(n-1) > B(n+1)", th.aux_B_nminus, th.aux_B_nplus)
    c.gt("A decreasing", aux_A(n), aux_A(n + 1))
    c.gt("B decreasing", aux_B(n), aux_B(n + 1))
    return c.record("chain", n, None)


# -- surface checks --


def _F_max(params, spec):
    return grid_max(
        lambda U, V: surface.eval_F(params, U, V),
        (-1, 1, -1, 1),
        spec,
        slope_bound=surface.F_slope_bound(params),
    )


def _G_max(params, spec):
    return grid_max(
        lambda U, V: surface.eval_G(params, U, V),
        (-1, 1, -1, 1),
        spec,
        slope_bound=surface.G_slope_bound(params),
    )


def _corner_claim(c, params, F, tol):
    n, lam = params.n, params.lam
    claim = 4 * lam * n * n - 12 * n + 4
    c.le("max F <= 4 lam n^2 - 12n + 4", F.value, claim, F.certified_gap + tol)
    c.ge("max F reaches the corner value", F.value, claim, F.certified_gap + tol)
    d = _nearest(F.location, [(1, -1), (-1, 1)])
    c.le("argmax F at (1,-1) or (-1,1)", d, TOL_ARGMAX)
    c.close("F(1,-1) closed form", surface.eval_F(params, 1.0, -1.0), claim, TOL_IDENTITY)
    c.extra.update(
        F_max=F.value, F_argmax=list(F.location), F_gap=F.certified_gap, F_excluded_cells=F.excluded_cells
    )
    return claim


def check_lemma5(n, lam, spec: GridSpec = GridSpec(), tol: float = TOL_ORACLE) -> CheckRecord:
    params = _p(n, lam)
    _require(lam >= aux_A(n), "corner check needs lam >= (10n-2)/(n+1)^2")
    c = _Conditions()
    _corner_claim(c, params, _F_max(params, spec), tol)
    G = _G_max(params, spec)
    g_claim = 4 * lam * n * n - 16 * n + 8
    c.le("max G <= 4 lam n^2 - 16n + 8", G.value, g_claim, G.certified_gap + tol)
    c.close("G(1,-1) closed form", surface.eval_G(params, 1.0, -1.0), g_claim, TOL_IDENTITY)
    c.le("argmax G at a corner", _nearest(G.location, [(1, -1), (-1, 1)]), TOL_ARGMAX)
    c.extra.update(G_max=G.value, G_gap=G.certified_gap)
    return c.record("lemma5", n, lam)


def check_lemma6(n, lam, spec: GridSpec = GridSpec(), tol: float = TOL_ORACLE) -> CheckRecord:
    params = _p(n, lam)
    th = thresholds(n)
    _require(th.t_6n2 <= lam < th.aux_A, "corner check needs (6n-2)/(n^2+n) <= lam < (10n-2)/(n+1)^2")
    c = _Conditions()
    _corner_claim(c, params, _F_max(params, spec), tol)
    G = _G_max(params, spec)
    g_corner = surface.eval_G(params, 1.0, -1.0)
    c.le("max G <= G(1,-1)", G.value, g_corner, G.certified_gap + tol)
    c.close("G(1,-1) closed form", g_corner, 4 * lam * n * n - 16 * n + 8, TOL_IDENTITY)
    b = surface.boundary_restrictions(params)
    c.le("u0 of G(u,1) lies at or left of -1", b.phi_u0, -1.0, 1e-9)
    c.true("psi(v) = G(1,v) maximal at v=-1", b.maxima["psi"][0] == -1.0)
    c.gt("G(-1,1) - G(0,0) > 0", g_corner, surface.eval_G(params, 0.0, 0.0))
    c.extra.update(G_max=G.value, G_gap=G.certified_gap, phi_u0=b.phi_u0)
    return c.record("lemma6", n, lam)


def lemma7_case_identities(n: int, points: int = 101) -> tuple:
    """Largest residuals of the two exact-lambda factorizations of G on a grid."""
    u = np.linspace(-1, 1, points)
    U, V = np.meshgrid(u, u, indexing="ij")
    l1 = 2 / (n + 1)
    g1 = surface.eval_G(_p(n, l1), U, V)
    f1 = -4 * (2 * n - 1) * U**2 - 4 * (n - 1) / (n + 1) * V**2
    l2 = 2 * n / (n * n - n + 1)
    g2 = surface.eval_G(_p(n, l2), U, V)
    f2 = -2 * (n - 1) / (n * n - n + 1) * ((2 * n - 1) * U + V) ** 2
    return float(np.max(np.abs(g1 - f1))), float(np.max(np.abs(g2 - f2)))


def check_lemma7(n, lam, spec: GridSpec = GridSpec(), tol: float = TOL_ORACLE) -> CheckRecord:
    params = _p(n, lam)
    th = thresholds(n)
    _require(0 < lam <= th.lambda_small_max, "quadratic-form check needs 0 < lam <= 2n/(n^2-n+1)")
    c = _Conditions()
    G = _G_max(params, spec)
    c.le("max G <= 0", G.value, 0.0, G.certified_gap + tol)
    c.ge("max G equals G(0,0) = 0", G.value, surface.eval_G(params, 0.0, 0.0), G.certified_gap + tol)
    r1, r2 = lemma7_case_identities(n)
    c.le("case lam=2/(n+1) factorization", r1, 0.0, TOL_IDENTITY)
    c.le("case lam=2n/(n^2-n+1) factorization", r2, 0.0, TOL_IDENTITY)

    b = surface.boundary_restrictions(params)
    c.true("|v0| <= 1 iff lam <= 2/n", b.psi_v0_interior == (lam <= th.aux_B), v0=b.psi_v0)
    if b.psi_v0_interior:
        c.close("psi(v0) formula", b.psi(b.psi_v0), b.psi_at_v0_formula, TOL_IDENTITY)
        c.le("psi(v0) <= 0", b.psi_at_v0_formula, 0.0, TOL_IDENTITY)
    c.le("psi(-1) = 4 lam n^2 - 16n + 8 < 0", 4 * lam * n * n - 16 * n + 8, 0.0)
    c.le("|u0| < 1 for G(u,1)", abs(b.phi_u0), 1.0)
    c.close("phi(u0) formula", b.phi(b.phi_u0), b.phi_at_u0_formula, TOL_IDENTITY)
    c.le("phi(u0) <= 0", b.phi_at_u0_formula, 0.0, TOL_IDENTITY)
    for name in ("psi", "phi"):
        c.le(f"max {name} over [-1,1] <= 0", b.maxima[name][1], 0.0, TOL_IDENTITY)
    c.extra.update(G_max=G.value, G_argmax=list(G.location), G_gap=G.certified_gap, case_residuals=[r1, r2])
    return c.record("lemma7", n, lam)


def _edge_oracles(params, spec):
    b = surface.boundary_restrictions(params)
    slope_v = quadratic_slope_bound(b.Psi.c2, b.Psi.c1)
    slope_v_mirror = quadratic_slope_bound(b.Psi.c2, -b.Psi.c1)
    slope_u = quadratic_slope_bound(b.Phi.c2, b.Phi.c1)
    slope_u_mirror = quadratic_slope_bound(b.Phi.c2, -b.Phi.c1)
    F = functools.partial(surface.eval_F, params)
    return {
        "u=1": edge_max(lambda v: F(1.0, v), spec=spec, slope_bound=slope_v),
        "u=-1": edge_max(lambda v: F(-1.0, v), spec=spec, slope_bound=slope_v_mirror),
        "v=1": edge_max(lambda u: F(u, 1.0), spec=spec, slope_bound=slope_u),
        "v=-1": edge_max(lambda u: F(u, -1.0), spec=spec, slope_bound=slope_u_mirror),
    }


def check_lemma8(n, lam, spec: GridSpec = GridSpec(), tol: float = TOL_ORACLE) -> CheckRecord:
    params = _p(n, lam)
    th = thresholds(n)
    _require(th.lambda_small_max < lam < th.t_6n2, "boundary check needs 2n/(n^2-n+1) < lam < (6n-2)/(n^2+n)")
    c = _Conditions()
    edges = _edge_oracles(params, spec)
    best = max(edges.values(), key=lambda r: r.value)
    A = surface.boundary_max_F(params)
    c.le("four-edge max <= A", best.value, A, best.certified_gap + tol)
    c.ge("four-edge max >= A", best.value, A, best.certified_gap + tol)
    c.close("exact edge max equals A", surface.four_edge_max_F(params), A, TOL_IDENTITY)

    b = surface.boundary_restrictions(params)
    c.true("Psi(v) = F(1,v) maximal at v=-1", b.maxima["Psi"][0] == -1.0)
    c.close("Psi(-1) = 4 lam n^2 - 12n + 4", b.Psi(-1.0), 4 * lam * n * n - 12 * n + 4, TOL_IDENTITY)
    inside = abs(b.Phi_u0) <= 1
    c.true("|u0| <= 1 iff criterion >= 0", inside == (b.Phi_u0_criterion >= 0), u0=b.Phi_u0)
    c.true("|u0| <= 1 iff lam <= (5n-1)/(n^2+n)", inside == (lam <= th.t_5n1))
    c.close("Phi(u0) formula", b.Phi(b.Phi_u0), b.Phi_at_u0_formula, TOL_IDENTITY)
    c.close("Phi(-1) - Phi(u0) identity", b.Phi(-1.0) - b.Phi(b.Phi_u0), b.Phi_gap_identity, TOL_IDENTITY)
    c.le("Phi(-1) - Phi(u0) <= 0", b.Phi_gap_identity, 0.0)
    c.extra.update(
        A=A,
        edge_max={k: r.value for k, r in edges.items()},
        edge_gap={k: r.certified_gap for k, r in edges.items()},
        Phi_u0=b.Phi_u0,
    )
    return c.record("lemma8", n, lam)


def check_lemma9(n, lam) -> CheckRecord:
    params = _p(n, lam)
    th = thresholds(n)
    _require(th.lambda_small_max < lam < th.t_6n2, "critical-point check needs 2n/(n^2-n+1) < lam < (6n-2)/(n^2+n)")
    c = _Conditions()
    d = surface.discriminant(params)
    c.close("b^2 - 4ac = 64(n-1)^2 lam n (2-lam)", d.direct, d.closed, 1e-6)
    c.gt("discriminant > 0", d.closed, 0.0)
    f = surface.interior_formulas(params)
    c.close(
        "lam[(n+1)^2 lam - 8n] factorization",
        f.sign_identity_lhs,
        f.sign_identity_rhs,
        TOL_IDENTITY,
    )
    c.gt("lam[(n+1)^2 lam - 8n] < 0", 0.0, f.sign_identity_lhs)
    c.gt("lam(n-1) - 2 sqrt(lam n (2-lam)) < 0", 0.0, f.den)
    c.close("u/v rewritten form", f.ratio, f.ratio_rewritten, TOL_IDENTITY)
    quad = d.a * f.ratio**2 + d.b * f.ratio + d.c
    scale = abs(d.a) * f.ratio**2 + abs(d.b * f.ratio) + abs(d.c)
    c.le("u/v solves a r^2 + b r + c = 0", abs(quad), 0.0, TOL_IDENTITY * max(1.0, scale))
    c.close("v^2 two forms", f.v2, f.v2_alt, TOL_IDENTITY)
    c.gt("v^2 > 0", f.v2, 0.0)
    if f.v2 > 0:
        c.close("u v = (u/v) v^2", f.ratio * f.v2, f.uv, TOL_IDENTITY)
        c.close("u^2 = (u/v)^2 v^2", f.ratio**2 * f.v2, f.u2, TOL_IDENTITY)
    cps = surface.critical_points(params)
    c.le("origin is critical", cps.points[0].gradient_residual, 0.0, TOL_GRADIENT)
    for k, pt in enumerate(cps.interior):
        c.le(f"gradient residual at interior point {k}", pt.gradient_residual, 0.0, TOL_GRADIENT)
    c.extra.update(
        a=d.a, b=d.b, c=d.c, discriminant=d.closed, v2=f.v2, u2=f.u2, uv=f.uv, ratio=f.ratio,
        interior=[[p.u, p.v, p.gradient_residual] for p in cps.interior],
    )
    return c.record("lemma9", n, lam)


@functools.lru_cache(maxsize=None)
def interior_pair_flip(n: int) -> float:
    """Bisect the lambda at which the interior critical pair disappears."""
    th = thresholds(n)

    def exists(lam):
        return bool(surface.critical_points(_p(n, lam)).interior)

    lo, hi = max(th.lambda_small_max, th.t_5n1), th.t_6n2 * (1 - 1e-15)
    if not exists(lo) or exists(hi):
        return math.nan
    while hi - lo > 1e-14 * hi:
        mid = 0.5 * (lo + hi)
        if exists(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def check_lemma10(n, lam) -> CheckRecord:
    params = _p(n, lam)
    th = thresholds(n)
    _require(th.lambda_small_max < lam < th.t_6n2, "pair-count check needs 2n/(n^2-n+1) < lam < (6n-2)/(n^2+n)")
    c = _Conditions()
    cps = surface.critical_points(params)
    middle = lam < th.lambda_large_min
    c.true("critical point count", len(cps.points) == (3 if middle else 1), count=len(cps.points))
    c.close("F(0,0) = 4(n-1)", cps.points[0].f_value, 4 * (n - 1), TOL_IDENTITY)
    f = surface.interior_formulas(params)
    if middle:
        F1 = surface.F_at_interior_critical(params)
        for pt in cps.interior:
            c.close("F at point equals closed form", pt.f_value, F1, TOL_CRITICAL_VALUE)
        c.gt("F(u1,v1) > F(0,0)", F1, 4 * (n - 1))
        c.gt("v^2 > u^2", f.v2, f.u2)
        c.gt("u^2 > 0", f.u2, 0.0)
        c.gt("v^2 < 1", 1.0, f.v2)
        c.extra["F1"] = F1
    else:
        c.ge("v^2 >= 1", f.v2, 1.0, surface.V2_BOUNDARY_EPS)
    root_cond = surface.pair_root_condition(params)
    c.true("v^2 < 1 iff root condition negative", (root_cond < 0) == (f.v2 < 1) or abs(f.v2 - 1) < 1e-9, root_condition=root_cond)
    expanded, factored = surface.cubic_A(params)
    c.close("cubic expanded = factored", expanded, factored, 1e-9)
    c.close("cubic definition = expanded", surface.cubic_A_definition(params), expanded, 1e-9)
    if lam > th.aux_B_nminus:
        c.true("A > 0 iff v^2 < 1", (factored > 0) == middle, A=factored)
    flip = interior_pair_flip(n)
    c.close("interior pair vanishes at (3n+sqrt(5n^2-4n))/(n^2+n)", flip, th.lambda_large_min, 1e-9, scale=False)
    c.extra.update(v2=f.v2, u2=f.u2, flip=flip, lambda_large_min=th.lambda_large_min)
    return c.record("lemma10", n, lam)


def check_lemma11(n, lam, spec: GridSpec = GridSpec(), tol: float = TOL_ORACLE) -> CheckRecord:
    params = _p(n, lam)
    th = thresholds(n)
    _require(th.lambda_small_max < lam < th.t_6n2, "interior comparison needs 2n/(n^2-n+1) < lam < (6n-2)/(n^2+n)")
    c = _Conditions()
    F = _F_max(params, spec)
    corner = 4 * lam * n * n - 12 * n + 4
    A = surface.boundary_max_F(params)
    if lam >= th.lambda_large_min:
        claim = corner
        c.ge("corner value dominates F(0,0)", corner, 4 * (n - 1))
    else:
        claim = surface.F_at_interior_critical(params)
        r = math.sqrt(n * lam * (2 - lam))
        # The chain of intermediate lower estimates is recorded, not enforced:
        # only the identity and the positivity of its right side are needed.
        if lam > th.t_5n1:
            lhs = lam * (8 * n - (n + 1) ** 2 * lam) / (4 * n) * (claim - corner)
            rhs = lam * (n * (n + 1) ** 2 * lam**2 - 2 * n * (5 * n + 3) * lam + 4 * (5 * n - 1)) + 4 * (2 - lam) * r
            low = r / (n - 1) * (n * (n + 1) ** 2 * lam**2 - 2 * (5 * n * n + 5 * n - 2) * lam + (28 * n - 12))
            floor = r / ((n - 1) * n * (n + 1) ** 2) * (3 * n**4 - 6 * n**3 - n**2 + 8 * n - 4)
            c.close("case 1 identity", lhs, rhs, TOL_IDENTITY)
            c.gt("case 1 right side positive", rhs, 0.0)
            estimates = {"rhs": rhs, "first": low, "floor": floor, "first_holds": rhs > low, "floor_holds": low >= floor}
        else:
            lhs = lam * (8 * n - (n + 1) ** 2 * lam) / 4 * (claim - A)
            rhs = lam * (n - 1) * (2 * n * lam - 5 * n + 1) + 4 * n * (2 - lam) * r
            low = 2 * n * r * ((3 * n + 1) / (2 * n) - lam)
            c.close("case 2 identity", lhs, rhs, TOL_IDENTITY)
            c.gt("case 2 right side positive", rhs, 0.0)
            estimates = {"rhs": rhs, "first": low, "first_holds": rhs > low}
        c.extra["proof_estimates"] = estimates
        c.gt("interior value beats boundary", claim, A)
    c.le("max F <= claim", F.value, claim, F.certified_gap + tol)
    c.ge("max F reaches claim", F.value, claim, F.certified_gap + tol)
    c.extra.update(claim=claim, boundary_A=A, F_max=F.value, F_argmax=list(F.location), F_gap=F.certified_gap)
    return c.record("lemma11", n, lam)


# -- theorem level --


def check_theorem(
    n,
    lam,
    grid: int = 512,
    bound: Callable[[ProblemParams], float] = theorem_bound,
    tol: float = TOL_SWEEP,
) -> CheckRecord:
    params = _p(n, lam)
    regime = classify(params)
    b = bound(params)
    c = _Conditions()
    sw = extremal.sweep_extreme_points(params, grid, "zalcman")
    c.le("sweep <= bound", sw.max_value, b, tol)
    sj = extremal.sweep_extreme_points(params, grid, "j")
    c.le("J sweep <= bound", sj.max_value, b, tol)
    # relative: just past the small-lambda threshold the excess over 2n-1 is
    # itself about 1e-6 and sits in a basin narrower than the lattice
    c.ge("J sweep reaches bound", sj.max_value, b, tol * max(1.0, abs(b)))
    c.extra.update(
        regime=regime.value,
        bound=b,
        sweep_max=sw.max_value,
        sweep_argmax=[sw.argmax.s, sw.argmax.t],
        sharpness_gap=b - sw.max_value,
        j_sweep_max=sj.max_value,
    )
    if regime is Regime.LARGE:
        koebe = extremal.zalcman_functional(extremal.CoefficientVector.koebe(2 * n - 1), params)
        c.close("Koebe attains bound", koebe.z_complex.real, b, 1e-9)
        c.ge("sweep attains bound", sw.max_value, b, tol)
        c.true("sweep argmax is a Koebe rotation", extremal.is_koebe_rotation(sw.argmax, n))
        c.extra["koebe_value"] = koebe.z_complex.real
    else:
        c.extra["sharpness"] = "informational"
    return c.record("theorem", n, lam)


def check_continuity(n: int) -> CheckRecord:
    """Branch formulas agree at both thresholds."""
    th = thresholds(n)
    c = _Conditions()
    l1, l2 = th.lambda_small_max, th.lambda_large_min
    c.close("middle = small at 2n/(n^2-n+1)", middle_bound(n, l1), small_bound(n), 1e-9)
    c.close("middle = large at lambda_2", middle_bound(n, l2), large_bound(n, l2), 1e-9)
    return c.record("theorem.continuity", n, None)


def check_lambda_one(n: int) -> CheckRecord:
    c = _Conditions()
    b = theorem_bound(_p(n, 1.0))
    if n >= 4:
        c.true("regime at lam=1 is large", classify(_p(n, 1.0)) is Regime.LARGE)
        c.close("bound = (n-1)^2", b, (n - 1) ** 2, 0.0)
    else:
        c.gt("n=3 bound exceeds (n-1)^2", b, (n - 1) ** 2)
    c.extra["bound"] = b
    return c.record("theorem.lambda_one", n, 1.0)


def check_corollary(n: int, points: int = 400) -> CheckRecord:
    formula = {3: corollary_n3, 4: corollary_n4}[n]
    c = _Conditions()
    lams = np.linspace(1e-3, 3.0, points)
    worst = max(abs(formula(l) - theorem_bound(_p(n, l))) / max(1.0, abs(formula(l))) for l in lams)
    c.le("special case = general bound", worst, 0.0, TOL_IDENTITY)
    if n == 4:
        lo, hi = N4_STATED_MIDDLE_RANGE
        c.extra["stated_middle_range"] = [lo, hi]
        c.extra["stated_range_empty"] = lo >= hi
        c.extra["general_middle_range"] = [thresholds(4).lambda_small_max, thresholds(4).lambda_large_min]
    c.extra["max_rel_diff"] = worst
    return c.record(f"corollary.n{n}", n, None)


# -- seeded property checks --


def check_properties(n: int, rng: np.random.Generator, samples: int = 200) -> list:
    out = []
    lams = rng.uniform(0.01, 3.0, samples)
    U = rng.uniform(-1, 1, samples)
    V = rng.uniform(-1, 1, samples)

    c = _Conditions()
    worst_sym = worst_env = worst_form = 0.0
    for lam, u, v in zip(lams, U, V):
        p = _p(n, lam)
        F = surface.eval_F(p, u, v)
        g = surface.eval_G(p, u, v)
        worst_sym = max(
            worst_sym,
            abs(F - surface.eval_F(p, -u, -v)) / max(1.0, abs(F)),
            abs(g - surface.eval_G(p, -u, -v)) / max(1.0, abs(g)),
        )
        worst_env = max(worst_env, abs(F - surface.eval_G(p, u, v) - surface.envelope_gap(p, u, v)) / max(1.0, abs(F)))
        worst_form = max(worst_form, abs(g - surface.eval_G_split(p, u, v)) / max(1.0, abs(g)))
    # identities are compared relative to max(1, |value|)
    c.le("symmetry", worst_sym, 0.0, TOL_IDENTITY)
    c.le("envelope identity", worst_env, 0.0, TOL_IDENTITY)
    c.le("G form agreement", worst_form, 0.0, TOL_IDENTITY)
    out.append(c.record("property.surface", n, None))

    c = _Conditions()
    worst_rot = 0.0
    worst_dom = math.inf
    for lam in lams[: samples // 4]:
        p = _p(n, lam)
        s, t = rng.uniform(0, 2 * math.pi, 2)
        if extremal._same_angle(s, t):
            continue
        cv = extremal.CoefficientVector.from_extreme_point(extremal.ExtremePoint(s, t), 2 * n - 1)
        fv = extremal.zalcman_functional(cv, p)
        rv = extremal.zalcman_functional(extremal.rotate(cv, rng.uniform(0, 2 * math.pi)), p)
        worst_rot = max(worst_rot, abs(fv.z_modulus - rv.z_modulus) / max(1.0, fv.z_modulus))
        worst_dom = min(worst_dom, fv.j_value - fv.z_complex.real)
    c.le("rotation invariance", worst_rot, 0.0, TOL_IDENTITY)
    c.ge("J >= Re(z)", worst_dom, 0.0, TOL_IDENTITY)
    out.append(c.record("property.extremal", n, None))
    return out


# -- sampling and the full run --


def chebyshev_samples(lo: float, hi: float, k: int, nudge: float = NUDGE) -> list:
    """k Chebyshev-Lobatto points on [lo + nudge, hi - nudge]; the midpoint when k == 1."""
    if k <= 0:
        return []
    a, b = lo + nudge, hi - nudge
    if k == 1:
        return [0.5 * (a + b)]
    x = np.cos(np.pi * np.arange(k) / (k - 1))[::-1]
    return [float(v) for v in 0.5 * (a + b) + 0.5 * (b - a) * x]


def lemma_windows(n: int) -> dict:
    th = thresholds(n)
    mid = (th.lambda_small_max, th.t_6n2)
    return {
        "lemma5": (th.aux_A, LAMBDA_MAX),
        "lemma6": (th.t_6n2, th.aux_A),
        "lemma7": (0.0, th.lambda_small_max),
        "lemma8": mid,
        "lemma9": mid,
        "lemma10": mid,
        "lemma11": mid,
        "theorem.small": (0.0, th.lambda_small_max),
        "theorem.middle": (th.lambda_small_max, th.lambda_large_min),
        "theorem.large": (th.lambda_large_min, LAMBDA_MAX),
    }


@dataclass
class VerifyConfig:
    n_min: int = 3
    n_max: int = 10
    lambda_samples: int = 15
    grid: int = 512
    surface: GridSpec = GridSpec(512, 6, 8.0)
    edge: GridSpec = GridSpec(512, 6, 8.0)
    tol_identity: float = TOL_IDENTITY
    tol_oracle: float = TOL_ORACLE
    tol_sweep: float = TOL_SWEEP
    seed: int = DEFAULT_SEED
    property_samples: int = 200
    workers: int = 1
    bound: Callable[[ProblemParams], float] = theorem_bound

    def to_dict(self) -> dict:
        return {
            "n_min": self.n_min,
            "n_max": self.n_max,
            "lambda_samples": self.lambda_samples,
            "grid": self.grid,
            "surface": vars(self.surface),
            "edge": vars(self.edge),
            "tol_identity": self.tol_identity,
            "tol_oracle": self.tol_oracle,
            "tol_sweep": self.tol_sweep,
            "seed": self.seed,
            "property_samples": self.property_samples,
            "bound": getattr(self.bound, "__name__", repr(self.bound)),
        }


@dataclass
class VerificationReport:
    records: list
    summary: dict
    config: dict
    flags: list

    @property
    def failures(self) -> int:
        return self.summary["failed"]

    def to_text(self) -> str:
        return "".join(r.to_line() + "\n" for r in self.records)

    def to_dict(self) -> dict:
        return {
            "summary": self.summary,
            "config": self.config,
            "flags": self.flags,
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, default=_json_default)


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.bool_):
        return bool(x)
    raise TypeError(f"not serializable: {type(x)}")


def summarize(records: list) -> dict:
    per = {}
    for r in records:
        s = per.setdefault(r.check_id, {"total": 0, "passed": 0, "failed": 0})
        s["total"] += 1
        s["passed" if r.passed else "failed"] += 1
    return {
        "total": len(records),
        "passed": sum(r.passed for r in records),
        "failed": sum(not r.passed for r in records),
        "per_check": dict(sorted(per.items())),
    }


def _tasks(cfg: VerifyConfig) -> list:
    tasks = []
    k = cfg.lambda_samples
    for n in range(cfg.n_min, cfg.n_max + 1):
        if k > 0:
            tasks.append(functools.partial(check_chain, n))
            tasks.append(functools.partial(check_continuity, n))
            tasks.append(functools.partial(check_lambda_one, n))
        w = lemma_windows(n)
        for lam in chebyshev_samples(*w["lemma5"], k):
            tasks.append(functools.partial(check_lemma5, n, lam, cfg.surface, cfg.tol_oracle))
        for lam in chebyshev_samples(*w["lemma6"], k):
            tasks.append(functools.partial(check_lemma6, n, lam, cfg.surface, cfg.tol_oracle))
        for lam in chebyshev_samples(*w["lemma7"], k):
            tasks.append(functools.partial(check_lemma7, n, lam, cfg.surface, cfg.tol_oracle))
        for lam in chebyshev_samples(*w["lemma8"], k):
            tasks.append(functools.partial(check_lemma8, n, lam, cfg.edge, cfg.tol_oracle))
        for lam in chebyshev_samples(*w["lemma9"], k):
            tasks.append(functools.partial(check_lemma9, n, lam))
        for lam in chebyshev_samples(*w["lemma10"], k):
            tasks.append(functools.partial(check_lemma10, n, lam))
        for lam in chebyshev_samples(*w["lemma11"], k):
            tasks.append(functools.partial(check_lemma11, n, lam, cfg.surface, cfg.tol_oracle))
        for key in ("theorem.small", "theorem.middle", "theorem.large"):
            for lam in chebyshev_samples(*w[key], k):
                tasks.append(functools.partial(check_theorem, n, lam, cfg.grid, cfg.bound, cfg.tol_sweep))
    if k > 0:
        for n in (3, 4):
            if cfg.n_min <= n <= cfg.n_max:
                tasks.append(functools.partial(check_corollary, n))
    return tasks


def run_full(cfg: VerifyConfig = VerifyConfig()) -> VerificationReport:
    tasks = _tasks(cfg)
    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(lambda f: f(), tasks))
    else:
        records = [f() for f in tasks]
    if cfg.lambda_samples > 0 and cfg.property_samples > 0:
        rng = np.random.default_rng(cfg.seed)
        for n in range(cfg.n_min, cfg.n_max + 1):
            records.extend(check_properties(n, rng, cfg.property_samples))
    records.sort(key=CheckRecord.sort_key)

    flags = [FLAG_COROLLARY_N4]
    if any(r.check_id == "theorem" and r.details.get("regime") == Regime.MIDDLE.value for r in records):
        flags.append(FLAG_SWEEP_SHARPNESS)
    if any(
        not all(v for k, v in r.details.get("proof_estimates", {}).items() if k.endswith("_holds"))
        for r in records
    ):
        flags.append(FLAG_INTERIOR_ESTIMATES)
    return VerificationReport(records, summarize(records), cfg.to_dict(), flags)
