"""The reduction surfaces F and G on the square R = [-1, 1]^2.

F(u, v) = [(n+1)^2 lam - 8n] u^2 - 2(n-1)[(n+1) lam - 2] u v
          + 4(n-1) sqrt(1-u^2) sqrt(1-v^2) + (n-1)^2 lam v^2

G drops the square-root term in favour of 2ab <= a^2 + b^2, which leaves a
quadratic form. F is not differentiable on the boundary of R, so edge
behaviour is handled through the one-variable restrictions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .regimes import DomainError, ProblemParams, Regime, RegimeError, classify, thresholds

BOUNDARY_COLLAR = 1e-3
# interior pairs with v^2 this close to 1 are treated as touching the boundary
V2_BOUNDARY_EPS = 1e-12


class BoundaryError(DomainError):
    """Gradient requested where F is not differentiable."""


def _check_square(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(np.abs(u) > 1) or np.any(np.abs(v) > 1) or np.any(np.isnan(u)) or np.any(np.isnan(v)):
        raise DomainError("(u, v) must lie in [-1, 1] x [-1, 1]")
    return u, v


def _ret(x):
    return float(x) if np.ndim(x) == 0 else x


@dataclass(frozen=True)
class FCoefficients:
    """Coefficients of F: uu*u^2 + uv*u*v + vv*v^2 + root*sqrt(1-u^2)sqrt(1-v^2)."""

    uu: float
    uv: float
    vv: float
    root: float

    @classmethod
    def of(cls, params: ProblemParams) -> "FCoefficients":
        n, lam = params.n, params.lam
        return cls(
            uu=(n + 1) ** 2 * lam - 8 * n,
            uv=-2 * (n - 1) * ((n + 1) * lam - 2),
            vv=(n - 1) ** 2 * lam,
            root=4 * (n - 1),
        )


def eval_F(params: ProblemParams, u, v):
    u, v = _check_square(u, v)
    c = FCoefficients.of(params)
    out = (
        c.uu * u * u
        + c.uv * u * v
        + c.root * np.sqrt(1 - u * u) * np.sqrt(1 - v * v)
        + c.vv * v * v
    )
    return _ret(out)


def g_coefficients(params: ProblemParams) -> tuple:
    n, lam = params.n, params.lam
    return (
        lam * (n + 1) ** 2 - 10 * n + 2,
        -2 * (n - 1) * (lam * (n + 1) - 2),
        (n - 1) * (lam * (n - 1) - 2),
    )


def eval_G(params: ProblemParams, u, v):
    u, v = _check_square(u, v)
    guu, guv, gvv = g_coefficients(params)
    return _ret(guu * u * u + guv * u * v + gvv * v * v)


def eval_G_split(params: ProblemParams, u, v):
    """G written through A(n) = (10n-2)/(n+1)^2 and B(n) = 2/n."""
    u, v = _check_square(u, v)
    n, lam = params.n, params.lam
    A = (10 * n - 2) / (n + 1) ** 2
    out = (
        (n + 1) ** 2 * (lam - A) * u * u
        - 2 * (n * n - 1) * (lam - 2 / (n + 1)) * u * v
        + (n - 1) ** 2 * (lam - 2 / (n - 1)) * v * v
    )
    return _ret(out)


def envelope_gap(params: ProblemParams, u, v):
    """F - G, which equals 2(n-1)[u^2 + v^2 + 2 sqrt(1-u^2) sqrt(1-v^2)]."""
    u, v = _check_square(u, v)
    n = params.n
    return _ret(2 * (n - 1) * (u * u + v * v + 2 * np.sqrt(1 - u * u) * np.sqrt(1 - v * v)))


def gradient_F(params: ProblemParams, u: float, v: float) -> tuple:
    u, v = float(u), float(v)
    if not (abs(u) < 1 and abs(v) < 1):
        raise BoundaryError(
            "F is not differentiable on the boundary of R; "
            "use boundary_restrictions() for |u| = 1 or |v| = 1"
        )
    c = FCoefficients.of(params)
    su, sv = math.sqrt(1 - u * u), math.sqrt(1 - v * v)
    du = 2 * c.uu * u + c.uv * v - c.root * u * sv / su
    dv = c.uv * u + 2 * c.vv * v - c.root * v * su / sv
    return du, dv


def gradient_residual(params: ProblemParams, u: float, v: float) -> float:
    return math.hypot(*gradient_F(params, u, v))


# -- per-cell slope bounds (interval arithmetic on the partial derivatives) --


def _linear_range(a, b, xlo, xhi, ylo, yhi):
    """Range of a*x + b*y over a box."""
    ax = np.minimum(a * xlo, a * xhi), np.maximum(a * xlo, a * xhi)
    by = np.minimum(b * ylo, b * yhi), np.maximum(b * ylo, b * yhi)
    return ax[0] + by[0], ax[1] + by[1]


def _sqrt1m_range(lo, hi):
    """Range of sqrt(1 - x^2) over [lo, hi] inside [-1, 1]."""
    far = np.maximum(np.abs(lo), np.abs(hi))
    near = np.where((lo <= 0) & (hi >= 0), 0.0, np.minimum(np.abs(lo), np.abs(hi)))
    return np.sqrt(1 - far * far), np.sqrt(1 - near * near)


def _ratio_range(lo, hi, collar):
    """Range of x / sqrt(1 - x^2) (increasing); infinite inside the collar."""
    lim = 1 - collar
    bad = (lo < -lim) | (hi > lim)
    with np.errstate(divide="ignore", invalid="ignore"):
        rlo = lo / np.sqrt(1 - lo * lo)
        rhi = hi / np.sqrt(1 - hi * hi)
    return np.where(bad, -np.inf, rlo), np.where(bad, np.inf, rhi)


def _product_range(alo, ahi, blo, bhi):
    with np.errstate(invalid="ignore"):
        cands = [alo * blo, alo * bhi, ahi * blo, ahi * bhi]
    cands = [np.where(np.isnan(c), np.inf, c) for c in cands]
    lo = np.minimum.reduce([np.where(np.isinf(c), -np.inf, c) for c in cands])
    hi = np.maximum.reduce(cands)
    return lo, hi


def F_slope_bound(params: ProblemParams, collar: float = BOUNDARY_COLLAR):
    """Per-cell bounds on |dF/du|, |dF/dv|; infinite for cells in the collar."""
    c = FCoefficients.of(params)

    def bound(ulo, uhi, vlo, vhi):
        lu = _linear_range(2 * c.uu, c.uv, ulo, uhi, vlo, vhi)
        lv = _linear_range(c.uv, 2 * c.vv, ulo, uhi, vlo, vhi)
        ru = _ratio_range(ulo, uhi, collar)
        rv = _ratio_range(vlo, vhi, collar)
        su = _sqrt1m_range(ulo, uhi)
        sv = _sqrt1m_range(vlo, vhi)
        pu = _product_range(ru[0], ru[1], sv[0], sv[1])
        pv = _product_range(rv[0], rv[1], su[0], su[1])
        du = (lu[0] - c.root * pu[1], lu[1] - c.root * pu[0])
        dv = (lv[0] - c.root * pv[1], lv[1] - c.root * pv[0])
        return (
            np.maximum(np.abs(du[0]), np.abs(du[1])),
            np.maximum(np.abs(dv[0]), np.abs(dv[1])),
        )

    return bound


def G_slope_bound(params: ProblemParams):
    guu, guv, gvv = g_coefficients(params)

    def bound(ulo, uhi, vlo, vhi):
        du = _linear_range(2 * guu, guv, ulo, uhi, vlo, vhi)
        dv = _linear_range(guv, 2 * gvv, ulo, uhi, vlo, vhi)
        return (
            np.maximum(np.abs(du[0]), np.abs(du[1])),
            np.maximum(np.abs(dv[0]), np.abs(dv[1])),
        )

    return bound


# -- critical points --


@dataclass(frozen=True)
class SurfacePoint:
    u: float
    v: float
    f_value: float
    g_value: float

    @classmethod
    def at(cls, params: ProblemParams, u: float, v: float) -> "SurfacePoint":
        return cls(u, v, eval_F(params, u, v), eval_G(params, u, v))


@dataclass(frozen=True)
class CriticalPoint:
    u: float
    v: float
    f_value: float
    gradient_residual: float
    kind: str  # "Origin" or "InteriorPair"


@dataclass(frozen=True)
class CriticalPointSet:
    points: tuple
    regime_note: str
    v2: float = math.nan
    u2: float = math.nan
    uv: float = math.nan

    @property
    def interior(self) -> tuple:
        return tuple(p for p in self.points if p.kind == "InteriorPair")


@dataclass(frozen=True)
class InteriorFormulas:
    """Raw pieces of the closed-form interior critical point."""

    root: float  # sqrt(lam n (2 - lam))
    v2: float
    uv: float
    u2: float
    v2_alt: float  # same quantity through sqrt(n lam) - sqrt(2 - lam)
    den: float  # lam(n-1) - 2 root, negative inside the window
    sign_identity_lhs: float  # lam[(n+1)^2 lam - 8n]
    sign_identity_rhs: float  # [lam(n-1) + 2 root][lam(n-1) - 2 root]
    ratio: float  # u/v from the retained root of the quadratic
    ratio_rewritten: float  # the same ratio in its simplified form


def in_critical_window(params: ProblemParams) -> bool:
    th = thresholds(params.n)
    return th.lambda_small_max < params.lam < th.t_6n2


def interior_formulas(params: ProblemParams) -> InteriorFormulas:
    n, lam = params.n, params.lam
    if not lam < 2:
        raise RegimeError("closed-form critical point needs lam < 2")
    r = math.sqrt(lam * n * (2 - lam))
    q = (n - 1) * lam - r
    den = lam * (n - 1) - 2 * r
    v2 = (math.sqrt(n * lam) + math.sqrt(2 - lam)) ** 2 * q / ((n - 1) ** 2 * lam**2)
    v2_alt = (
        ((n + 1) * lam - 2) ** 2 / ((n - 1) ** 2 * lam**2) * q / (math.sqrt(n * lam) - math.sqrt(2 - lam)) ** 2
    )
    uv = ((n + 1) * lam - 2) * q / ((n - 1) * lam * den)
    u2 = (den + 2) * q / den**2
    a = ((n + 1) ** 2 * lam - 8 * n) * ((n + 1) * lam - 2)
    ratio = (n - 1) * (lam * ((n + 1) ** 2 * lam - 2 * (3 * n + 1)) + 4 * r) / a
    ratio_rw = (n - 1) * lam * (den + 2) / (((n + 1) * lam - 2) * den)
    return InteriorFormulas(
        root=r,
        v2=v2,
        uv=uv,
        u2=u2,
        v2_alt=v2_alt,
        den=den,
        sign_identity_lhs=lam * ((n + 1) ** 2 * lam - 8 * n),
        sign_identity_rhs=(lam * (n - 1) + 2 * r) * den,
        ratio=ratio,
        ratio_rewritten=ratio_rw,
    )


def critical_points(params: ProblemParams) -> CriticalPointSet:
    origin = CriticalPoint(0.0, 0.0, eval_F(params, 0.0, 0.0), gradient_residual(params, 0.0, 0.0), "Origin")
    if not in_critical_window(params):
        return CriticalPointSet((origin,), "outside critical-point window; origin only")

    f = interior_formulas(params)
    if not (f.v2 < 1 - V2_BOUNDARY_EPS and 0 <= f.u2 < 1):
        return CriticalPointSet(
            (origin,), "v^2 >= 1: no interior pair; origin only", f.v2, f.u2, f.uv
        )
    v = math.sqrt(f.v2)
    u = math.copysign(math.sqrt(f.u2), f.uv)
    pts = [origin]
    for su in (1.0, -1.0):
        pu, pv = su * u, su * v
        pts.append(
            CriticalPoint(pu, pv, eval_F(params, pu, pv), gradient_residual(params, pu, pv), "InteriorPair")
        )
    return CriticalPointSet(tuple(pts), "interior pair present", f.v2, f.u2, f.uv)


def lambda2_root_factor(n: int, lam: float) -> float:
    """n(n+1) lam^2 - 6 n lam + 4, whose larger root is the large-regime threshold."""
    return n * (n + 1) * lam * lam - 6 * n * lam + 4


def pair_root_condition(params: ProblemParams) -> float:
    """Negative exactly when the interior pair has v^2 < 1."""
    n, lam = params.n, params.lam
    r = math.sqrt(lam * n * (2 - lam))
    return 2 * lam * (n * lam - (n + 1)) + ((n - 1) * lam - 2) * r


def F_at_interior_critical(params: ProblemParams) -> float:
    if classify(params) is not Regime.MIDDLE:
        raise RegimeError("interior critical value is defined in the middle regime only")
    return F_interior_formula(params.n, params.lam)


def F_interior_formula(n: int, lam: float) -> float:
    r = math.sqrt(n * lam * (2 - lam))
    num = 4 * lam * (n - 1) * (lam * (n * n + 1) - 4 * n) + 16 * n * (2 - lam) * r
    return num / (lam * (8 * n - lam * (n + 1) ** 2))


# -- boundary restrictions --


@dataclass(frozen=True)
class EdgeQuadratic:
    """q(x) = c2 x^2 + c1 x + c0 restricted to [-1, 1]."""

    name: str
    c2: float
    c1: float
    c0: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return _ret(self.c2 * x * x + self.c1 * x + self.c0)

    @property
    def vertex(self) -> float:
        return -self.c1 / (2 * self.c2) if self.c2 != 0 else math.nan

    def maximize(self) -> tuple:
        """(argmax, max) over [-1, 1]; ties go to the smaller x."""
        cands = [-1.0, 1.0]
        x0 = self.vertex
        if self.c2 < 0 and -1 < x0 < 1:
            cands.append(x0)
        cands.sort()
        vals = [self(x) for x in cands]
        k = int(np.argmax(vals))
        return cands[k], vals[k]


@dataclass(frozen=True)
class BoundaryRestrictions:
    psi: EdgeQuadratic  # G(1, v)
    phi: EdgeQuadratic  # G(u, 1)
    Psi: EdgeQuadratic  # F(1, v)
    Phi: EdgeQuadratic  # F(u, 1)
    maxima: dict
    psi_v0: float
    psi_at_v0_formula: float
    psi_v0_interior: bool
    phi_u0: float
    phi_at_u0_formula: float
    Phi_u0: float
    Phi_at_u0_formula: float
    Phi_u0_criterion: float  # >= 0 iff |Phi_u0| <= 1
    Phi_gap_identity: float  # Phi(-1) - Phi(u0) in factored form


def boundary_restrictions(params: ProblemParams) -> BoundaryRestrictions:
    n, lam = params.n, params.lam
    guu, guv, gvv = g_coefficients(params)
    c = FCoefficients.of(params)
    psi = EdgeQuadratic("psi", gvv, guv, guu)
    phi = EdgeQuadratic("phi", guu, guv, gvv)
    Psi = EdgeQuadratic("Psi", c.vv, c.uv, c.uu)
    Phi = EdgeQuadratic("Phi", c.uu, c.uv, c.vv)

    lam_nm = lam * (n - 1) - 2
    with np.errstate(divide="ignore", invalid="ignore"):
        psi_v0 = (lam * (n + 1) - 2) / lam_nm if lam_nm else math.inf
        psi_v0_val = 8 * (2 * n - lam * (n * n - n + 1)) / lam_nm if lam_nm else math.inf
        phi_den = lam * (n + 1) ** 2 - 10 * n + 2
        phi_u0 = (n - 1) * (lam * (n + 1) - 2) / phi_den if phi_den else math.inf
        phi_u0_val = (
            8 * (n - 1) * (lam * (n * n - n + 1) - 2 * n) / (10 * n - 2 - lam * (n + 1) ** 2)
            if phi_den
            else math.inf
        )
        Phi_den = lam * (n + 1) ** 2 - 8 * n
        Phi_u0 = (n - 1) * (lam * (n + 1) - 2) / Phi_den if Phi_den else math.inf
        Phi_u0_val = (
            4 * (n - 1) ** 2 * (lam * (n - 1) + 1) / (8 * n - (n + 1) ** 2 * lam) if Phi_den else math.inf
        )
        gap = -4 * (n * (n + 1) * lam - (5 * n - 1)) ** 2 / (8 * n - (n + 1) ** 2 * lam) if Phi_den else math.inf

    return BoundaryRestrictions(
        psi=psi,
        phi=phi,
        Psi=Psi,
        Phi=Phi,
        maxima={q.name: q.maximize() for q in (psi, phi, Psi, Phi)},
        psi_v0=psi_v0,
        psi_at_v0_formula=psi_v0_val,
        psi_v0_interior=bool(abs(psi_v0) <= 1),
        phi_u0=phi_u0,
        phi_at_u0_formula=phi_u0_val,
        Phi_u0=Phi_u0,
        Phi_at_u0_formula=Phi_u0_val,
        Phi_u0_criterion=((n * n + n) * lam - (5 * n - 1)) * ((n + 1) * lam - (3 * n + 1)),
        Phi_gap_identity=gap,
    )


def four_edge_max_F(params: ProblemParams) -> float:
    """Exact max of F over the boundary of R from the edge quadratics.

    F(-1, v) = F(1, -v) and F(u, -1) = F(-u, 1), so two quadratics cover all four edges.
    """
    b = boundary_restrictions(params)
    return max(b.maxima["Psi"][1], b.maxima["Phi"][1])


def boundary_max_F(params: ProblemParams) -> float:
    th = thresholds(params.n)
    n, lam = params.n, params.lam
    if not th.lambda_small_max < lam < th.t_6n2:
        raise RegimeError("boundary maximum formula holds for 2n/(n^2-n+1) < lam < (6n-2)/(n^2+n)")
    if lam <= th.t_5n1:
        return 4 * (n - 1) ** 2 * (lam * (n - 1) + 1) / (8 * n - (n + 1) ** 2 * lam)
    return 4 * lam * n * n - 12 * n + 4


# -- algebraic auxiliaries --


@dataclass(frozen=True)
class Discriminant:
    a: float
    b: float
    c: float
    direct: float  # b^2 - 4ac
    closed: float  # 64 (n-1)^2 lam n (2 - lam)

    @property
    def value(self) -> float:
        return self.closed

    @property
    def rel_error(self) -> float:
        return abs(self.direct - self.closed) / max(1.0, abs(self.closed))


def discriminant(params: ProblemParams) -> Discriminant:
    n, lam = params.n, params.lam
    a = ((n + 1) ** 2 * lam - 8 * n) * ((n + 1) * lam - 2)
    b = -2 * lam * (n - 1) * ((n + 1) ** 2 * lam - 2 * (3 * n + 1))
    c = lam * (n - 1) ** 2 * ((n + 1) * lam - 2)
    return Discriminant(a, b, c, b * b - 4 * a * c, 64 * (n - 1) ** 2 * lam * n * (2 - lam))


def cubic_A(params: ProblemParams) -> tuple:
    """(expanded, factored) evaluations of the cubic that decides v^2 < 1."""
    n, lam = params.n, params.lam
    expanded = (
        n * (n + 1) ** 2 * lam**3
        - 2 * n * (n + 1) * (n + 3) * lam**2
        + 4 * (3 * n * n + n + 1) * lam
        - 8 * n
    )
    factored = lambda2_root_factor(n, lam) * ((n + 1) * lam - 2 * n)
    return expanded, factored


def cubic_A_definition(params: ProblemParams) -> float:
    """4 lam [n lam - (n+1)]^2 - [(n-1) lam - 2]^2 n (2 - lam)."""
    n, lam = params.n, params.lam
    return 4 * lam * (n * lam - (n + 1)) ** 2 - ((n - 1) * lam - 2) ** 2 * n * (2 - lam)
