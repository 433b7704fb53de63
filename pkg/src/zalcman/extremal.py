"""Extreme points of the closed convex hull of close-to-convex functions.

An extreme point is fixed by two unimodular numbers x = e^{is}, y = e^{it}
with x != y, and has Taylor coefficients

    a_k = (k+1)/2 * y^(k-1) - (k-1)/2 * x * y^(k-2),   k >= 2.

The torus sweep maximizes a coefficient functional over (s, t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
import numpy as np
from scipy.optimize import minimize

from .optimize import MAX_MOVES, evaluate_lattice, first_argmax
from .regimes import DomainError, ProblemParams

TWO_PI = 2 * math.pi
DIAGONAL_EPS = 1e-12

FUNCTIONALS = ("zalcman", "j", "modulus")
POLISH_STARTS = 2
# improvements below this relative size are rounding noise and are ignored
MIN_GAIN = 1e-13


def _same_angle(s, t):
    d = np.mod(np.asarray(s) - np.asarray(t), TWO_PI)
    return (d < DIAGONAL_EPS) | (d > TWO_PI - DIAGONAL_EPS)


@dataclass(frozen=True)
class ExtremePoint:
    s: float
    t: float

    def __post_init__(self):
        s = math.fmod(float(self.s), TWO_PI)
        t = math.fmod(float(self.t), TWO_PI)
        s += TWO_PI if s < 0 else 0.0
        t += TWO_PI if t < 0 else 0.0
        if bool(_same_angle(s, t)):
            raise DomainError("extreme points require x != y (s != t)")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)


KOEBE = ExtremePoint(math.pi, 0.0)


def _coeff(s, t, k):
    # phases are formed directly to keep |a_k| exact for large k
    return (k + 1) / 2 * np.exp(1j * (k - 1) * t) - (k - 1) / 2 * np.exp(1j * (s + (k - 2) * t))


PHASE_SNAP = 1e-15


def _cis(theta: float) -> complex:
    # snap rounding residue so multiples of pi/2 give exact unit phases
    c, s = math.cos(theta), math.sin(theta)
    return complex(0.0 if abs(c) < PHASE_SNAP else c, 0.0 if abs(s) < PHASE_SNAP else s)


def extreme_coeff(p: ExtremePoint, k: int) -> complex:
    if k < 2:
        raise DomainError(f"coefficient index must be >= 2, got {k}")
    return (k + 1) / 2 * _cis((k - 1) * p.t) - (k - 1) / 2 * _cis(p.s + (k - 2) * p.t)


@dataclass(frozen=True)
class CoefficientVector:
    """Taylor coefficients a_1..a_N; ``coefficients[0]`` is a_1 = 1."""

    coefficients: tuple

    def __post_init__(self):
        c = tuple(complex(z) for z in self.coefficients)
        if not c or c[0] != 1:
            raise DomainError("a_1 must equal 1")
        object.__setattr__(self, "coefficients", c)

    @property
    def N(self) -> int:
        return len(self.coefficients)

    def __getitem__(self, k: int) -> complex:
        """1-based access: ``c[k]`` is a_k."""
        if not 1 <= k <= self.N:
            raise DomainError(f"a_{k} not available (N = {self.N})")
        return self.coefficients[k - 1]

    @classmethod
    def from_extreme_point(cls, p: ExtremePoint, N: int) -> "CoefficientVector":
        return cls((1.0,) + tuple(extreme_coeff(p, k) for k in range(2, N + 1)))

    @classmethod
    def koebe(cls, N: int) -> "CoefficientVector":
        return cls(tuple(float(k) for k in range(1, N + 1)))

    @classmethod
    def identity(cls, N: int) -> "CoefficientVector":
        return cls((1.0,) + (0.0,) * (N - 1))

    def mix(self, other: "CoefficientVector", t: float) -> "CoefficientVector":
        """Convex combination t*self + (1-t)*other (a_1 stays 1)."""
        if self.N != other.N:
            raise DomainError("length mismatch")
        return CoefficientVector(
            tuple(t * a + (1 - t) * b for a, b in zip(self.coefficients, other.coefficients))
        )


@dataclass(frozen=True)
class FunctionalValue:
    z_complex: complex
    z_modulus: float
    j_value: float


def zalcman_functional(c: CoefficientVector, params: ProblemParams) -> FunctionalValue:
    n, lam = params.n, params.lam
    if c.N < 2 * n - 1:
        raise DomainError(f"need coefficients up to a_{2 * n - 1}, have N = {c.N}")
    an, a2 = c[n], c[2 * n - 1]
    z = lam * an * an - a2
    return FunctionalValue(z, abs(z), lam * an.real**2 - a2.real)


def rotate(c: CoefficientVector, theta: float) -> CoefficientVector:
    """Coefficients of e^{-i theta} f(e^{i theta} z)."""
    return CoefficientVector(
        tuple(a * np.exp(1j * k * theta) if k else a for k, a in enumerate(c.coefficients))
    )


def j_convexity_remainder(b_n: float, c_n: float, t_mix: float, lam: float) -> float:
    """Exact defect t*J(g) + (1-t)*J(h) - J(t*g + (1-t)*h) for real parts b_n, c_n."""
    if not 0 <= t_mix <= 1:
        raise DomainError(f"t_mix must lie in [0, 1], got {t_mix}")
    if not lam > 0:
        raise DomainError("lambda must be > 0")
    return lam * t_mix * (1 - t_mix) * (b_n - c_n) ** 2


def torus_functional(params: ProblemParams, functional: str = "zalcman"):
    """Vectorized objective on (s, t); the diagonal s == t maps to -inf."""
    if functional not in FUNCTIONALS:
        raise ValueError(f"unknown functional {functional!r}; choose from {FUNCTIONALS}")
    n, lam = params.n, params.lam

    def fn(S, T):
        an = _coeff(S, T, n)
        a2 = _coeff(S, T, 2 * n - 1)
        if functional == "zalcman":
            v = (lam * an * an - a2).real
        elif functional == "j":
            v = lam * an.real**2 - a2.real
        else:
            v = np.abs(lam * an * an - a2)
        return np.where(_same_angle(S, T), -np.inf, v)

    return fn


@dataclass(frozen=True)
class SweepResult:
    max_value: float
    argmax: ExtremePoint
    functional: str
    grid: int
    history: tuple


def _axis_gain(vals: np.ndarray, axis: int):
    """Parabolic vertex offset (in lattice steps) and gain along one axis.

    Both are zero except at points that are maxima along that axis.
    """
    lo, hi = np.roll(vals, 1, axis=axis), np.roll(vals, -1, axis=axis)
    with np.errstate(invalid="ignore", divide="ignore"):
        is_max = np.isfinite(vals) & (vals >= lo) & (vals >= hi)
        curv = 2 * vals - lo - hi
        ok = is_max & (curv > 0)
        gain = np.where(ok, (hi - lo) ** 2 / (8 * curv), 0.0)
        shift = np.where(ok, (hi - lo) / (2 * curv), 0.0)
    return is_max, np.nan_to_num(gain, nan=0.0, posinf=0.0), np.nan_to_num(shift, nan=0.0)


def _lattice_peaks(vals: np.ndarray, k: int) -> list:
    """Up to k start points ``(i, j, di, dj)`` on a periodic lattice, best first.

    Candidates are maxima along either axis, so ridges narrower than the
    lattice spacing still get a start. They are ranked by the lattice value
    plus a parabolic estimate of the sub-grid excess along each axis, then by
    row-major index. ``di, dj`` locate the parabolic vertex in lattice steps.
    The global first argmax always leads.
    """
    max_s, gain_s, shift_s = _axis_gain(vals, 0)
    max_t, gain_t, shift_t = _axis_gain(vals, 1)
    score = (vals + gain_s + gain_t).ravel()
    idx = np.flatnonzero(max_s | max_t)
    order = idx[np.lexsort((idx, -score[idx]))]
    first = np.ravel_multi_index(first_argmax(vals), vals.shape)
    picked = [int(first)] + [int(q) for q in order if q != first][: k - 1]
    out = []
    for q in picked:
        i, j = np.unravel_index(q, vals.shape)
        out.append((int(i), int(j), float(shift_s[i, j]), float(shift_t[i, j])))
    return out


def _refine_peak(fn, best, bs, bt, step, rounds, zoom):
    history = [best]
    last = 2 * zoom
    for _ in range(rounds):
        offs = (step / zoom) * np.arange(-zoom, zoom + 1)
        for _ in range(MAX_MOVES):
            rs, rt = bs + offs, bt + offs
            loc = fn(*np.meshgrid(rs, rt, indexing="ij"))
            a, b = first_argmax(loc)
            if not loc[a, b] > best + MIN_GAIN * max(1.0, abs(best)):
                break
            best, bs, bt = float(loc[a, b]), float(rs[a]), float(rt[b])
            # the torus has no edges: keep following a ridge out of the window
            if a not in (0, last) and b not in (0, last):
                break
        step /= zoom
        history.append(best)
    return best, bs, bt, tuple(history)


def _polish(fn, best, bs, bt, step):
    """Derivative-free polish; lattice windows crawl along diagonal ridges."""
    res = minimize(
        lambda x: -float(fn(np.array(x[0]), np.array(x[1]))),
        [bs, bt],
        method="Nelder-Mead",
        options={"xatol": 1e-11, "fatol": 1e-13, "maxiter": 600, "initial_simplex": _simplex(bs, bt, step)},
    )
    if np.isfinite(res.fun) and -res.fun > best + MIN_GAIN * max(1.0, abs(best)):
        return float(-res.fun), float(res.x[0]), float(res.x[1]), True
    return best, bs, bt, False


def _simplex(s, t, h):
    h = max(h, 1e-9) * 10
    return np.array([[s, t], [s + h, t], [s, t + h]])


def sweep_extreme_points(
    params: ProblemParams,
    grid: int,
    functional: str = "zalcman",
    rounds: int = 6,
    zoom: int = 10,
    workers: int = 1,
    starts: int = 32,
) -> SweepResult:
    """Maximize a coefficient functional over all extreme points.

    ``functional="zalcman"`` is Re(lam*a_n^2 - a_{2n-1}); its maximum equals
    the maximum modulus because the family is closed under rotation.
    ``"j"`` is the convex surrogate lam*(Re a_n)^2 - Re a_{2n-1}.

    The ``starts`` best local maxima of the periodic lattice are each
    refined; narrow peaks barely above a broad plateau need this.
    """
    if grid < 8:
        raise DomainError(f"grid must be >= 8, got {grid}")
    if starts < 1:
        raise DomainError(f"starts must be >= 1, got {starts}")
    fn = torus_functional(params, functional)
    base = TWO_PI * np.arange(grid) / grid
    vals = evaluate_lattice(fn, base, base, workers)

    step = TWO_PI / grid
    refined = []
    for i, j, di, dj in _lattice_peaks(vals, starts):
        v, s, t = float(vals[i, j]), float(base[i]), float(base[j])
        # a crest narrower than the refinement window is only seen from its vertex
        sv, tv = s + di * step, t + dj * step
        vv = float(fn(np.array(sv), np.array(tv)))
        if vv > v + MIN_GAIN * max(1.0, abs(v)):
            v, s, t = vv, sv, tv
        refined.append(_refine_peak(fn, v, s, t, step, rounds, zoom))
    # stable sort keeps the earlier start first on exact ties
    refined.sort(key=lambda r: -r[0])
    best, bs, bt, history = refined[0]
    final_step = step / zoom**rounds
    for v, s, t, h in refined[:POLISH_STARTS]:
        v, s, t, moved = _polish(fn, v, s, t, final_step)
        if v > best:
            best, bs, bt, history = v, s, t, h + ((v,) if moved else ())

    return SweepResult(best, ExtremePoint(bs, bt), functional, grid, history)


def is_koebe_rotation(p: ExtremePoint, n: int, tol: float = 1e-6) -> bool:
    """True if p is a rotation of the Koebe point that makes lam*a_n^2 - a_{2n-1} real positive.

    Rotating the Koebe point by phi gives (s, t) = (pi + phi, phi); the
    functional picks up the phase e^{i(2n-2)phi}.
    """
    d = math.remainder(p.s - p.t - math.pi, TWO_PI)
    phase = math.remainder((2 * n - 2) * p.t, TWO_PI)
    return abs(d) < tol and abs(phase) < (2 * n - 2) * tol

