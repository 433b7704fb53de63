"""Brute-force maximization on rectangles and intervals.

Dense lattice evaluation, then zoomed re-gridding around the incumbent.
The certified gap comes from per-cell slope bounds on the base lattice:
for a point in a cell with spacing (hx, hy), the nearest corner is at most
hx/2 and hy/2 away per axis, so

    f(p) <= max(corners) + Lx * hx / 2 + Ly * hy / 2.

Cells whose slope bound is not finite are left out of the certificate and
counted in ``excluded_cells``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

SlopeBound2D = Callable[[np.ndarray, np.ndarray, np.ndarray, np.ndarray], tuple]
SlopeBound1D = Callable[[np.ndarray, np.ndarray], np.ndarray]

ESTIMATE_SAFETY = 2.0
# recentering steps allowed per refinement level before zooming anyway
MAX_MOVES = 64


@dataclass(frozen=True)
class GridSpec:
    resolution: int = 512
    refinement_rounds: int = 6
    zoom: float = 8.0

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < 8:
            raise ValueError(f"resolution must be an integer >= 8, got {self.resolution}")
        if int(self.refinement_rounds) != self.refinement_rounds or self.refinement_rounds < 0:
            raise ValueError("refinement_rounds must be a non-negative integer")
        if not self.zoom > 1:
            raise ValueError(f"zoom must be > 1, got {self.zoom}")


@dataclass
class MaxResult:
    value: float
    location: tuple
    certified_gap: float
    # "bound" when a slope bound was supplied, "estimate" otherwise
    gap_kind: str = "bound"
    excluded_cells: int = 0
    history: list = field(default_factory=list)


def evaluate_lattice(fn, xs: np.ndarray, ys: np.ndarray, workers: int = 1) -> np.ndarray:
    """Evaluate ``fn`` on the outer lattice xs x ys, rows indexed by xs.

    Rows are split into contiguous blocks when ``workers > 1``; blocks are
    reassembled in order, so the result does not depend on scheduling.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if workers <= 1 or len(xs) < 2 * workers:
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        return np.asarray(fn(X, Y), dtype=float)

    blocks = np.array_split(np.arange(len(xs)), workers)

    def run(idx):
        X, Y = np.meshgrid(xs[idx], ys, indexing="ij")
        return np.asarray(fn(X, Y), dtype=float)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(run, blocks))
    return np.concatenate(parts, axis=0)


def first_argmax(values: np.ndarray) -> tuple:
    """Index of the maximum; exact ties go to the first in row-major order.

    With increasing axes this is the lexicographically smallest location.
    NaN entries are ignored.
    """
    flat = np.where(np.isnan(values), -np.inf, values).ravel()
    return np.unravel_index(int(np.argmax(flat)), values.shape)


def _refine_axis(center: float, step: float, zoom: float, lo: float, hi: float) -> np.ndarray:
    k = math.ceil(zoom)
    new_step = step / zoom
    pts = center + new_step * np.arange(-k, k + 1)
    pts = pts[(pts >= lo) & (pts <= hi)]
    # the incumbent coordinate must survive exactly
    return np.union1d(pts, [center])


def _on_edge(k: int, pts: np.ndarray, lo: float, hi: float) -> bool:
    """True if index k is an end of a local window that was not clipped by the domain."""
    return (k == 0 and pts[0] > lo) or (k == len(pts) - 1 and pts[-1] < hi)


def grid_max(
    fn,
    domain: tuple,
    spec: GridSpec = GridSpec(),
    slope_bound: Optional[SlopeBound2D] = None,
    lipschitz: Optional[tuple] = None,
    workers: int = 1,
) -> MaxResult:
    """Maximize a vectorized ``fn(X, Y)`` over ``domain = (x0, x1, y0, y1)``.

    ``slope_bound(x_lo, x_hi, y_lo, y_hi)`` returns per-cell bounds on
    |df/dx| and |df/dy|; ``lipschitz=(Lx, Ly)`` gives global constants.
    Without either, slopes are estimated from lattice differences.
    """
    x0, x1, y0, y1 = map(float, domain)
    if not (x1 > x0 and y1 > y0):
        raise ValueError(f"degenerate rectangle {domain}")

    m = spec.resolution
    xs = np.linspace(x0, x1, m)
    ys = np.linspace(y0, y1, m)
    vals = evaluate_lattice(fn, xs, ys, workers)
    i, j = first_argmax(vals)
    best, bx, by = float(vals[i, j]), float(xs[i]), float(ys[j])
    base_max = best
    history = [best]

    hx, hy = xs[1] - xs[0], ys[1] - ys[0]
    sx, sy = hx, hy
    for _ in range(spec.refinement_rounds):
        for _ in range(MAX_MOVES):
            rx = _refine_axis(bx, sx, spec.zoom, x0, x1)
            ry = _refine_axis(by, sy, spec.zoom, y0, y1)
            loc = evaluate_lattice(fn, rx, ry)
            a, b = first_argmax(loc)
            if not loc[a, b] > best:
                break
            best, bx, by = float(loc[a, b]), float(rx[a]), float(ry[b])
            # keep sliding along a ridge while the winner sits on the window edge
            if not _on_edge(a, rx, x0, x1) and not _on_edge(b, ry, y0, y1):
                break
        sx, sy = sx / spec.zoom, sy / spec.zoom
        history.append(best)

    # certificate over base cells
    corner = np.maximum.reduce([vals[:-1, :-1], vals[1:, :-1], vals[:-1, 1:], vals[1:, 1:]])
    if slope_bound is not None:
        XL, YL = np.meshgrid(xs[:-1], ys[:-1], indexing="ij")
        XH, YH = np.meshgrid(xs[1:], ys[1:], indexing="ij")
        lx, ly = slope_bound(XL, XH, YL, YH)
        kind = "bound"
    else:
        if lipschitz is None:
            lipschitz = (
                ESTIMATE_SAFETY * np.nanmax(np.abs(np.diff(vals, axis=0))) / hx,
                ESTIMATE_SAFETY * np.nanmax(np.abs(np.diff(vals, axis=1))) / hy,
            )
            kind = "estimate"
        else:
            kind = "bound"
        lx = np.full(corner.shape, float(lipschitz[0]))
        ly = np.full(corner.shape, float(lipschitz[1]))
    upper = corner + lx * hx / 2 + ly * hy / 2
    finite = np.isfinite(upper)
    excluded = int(corner.size - np.count_nonzero(finite))
    ceiling = float(np.max(upper[finite])) if finite.any() else base_max
    gap = max(0.0, ceiling - best)

    return MaxResult(
        value=best,
        location=(bx, by),
        certified_gap=gap,
        gap_kind=kind,
        excluded_cells=excluded,
        history=history,
    )


def edge_max(
    fn1d,
    interval: tuple = (-1.0, 1.0),
    spec: GridSpec = GridSpec(),
    slope_bound: Optional[SlopeBound1D] = None,
    lipschitz: Optional[float] = None,
) -> MaxResult:
    """One-dimensional counterpart of :func:`grid_max`."""
    a, b = map(float, interval)
    if not b > a:
        raise ValueError(f"degenerate interval {interval}")

    xs = np.linspace(a, b, spec.resolution)
    vals = np.asarray(fn1d(xs), dtype=float)
    (i,) = first_argmax(vals)
    best, bx = float(vals[i]), float(xs[i])
    history = [best]
    h = xs[1] - xs[0]
    step = h
    for _ in range(spec.refinement_rounds):
        for _ in range(MAX_MOVES):
            rx = _refine_axis(bx, step, spec.zoom, a, b)
            loc = np.asarray(fn1d(rx), dtype=float)
            (k,) = first_argmax(loc)
            if not loc[k] > best:
                break
            best, bx = float(loc[k]), float(rx[k])
            if not _on_edge(k, rx, a, b):
                break
        step /= spec.zoom
        history.append(best)

    corner = np.maximum(vals[:-1], vals[1:])
    if slope_bound is not None:
        slopes = np.asarray(slope_bound(xs[:-1], xs[1:]), dtype=float)
        kind = "bound"
    elif lipschitz is not None:
        slopes = np.full(corner.shape, float(lipschitz))
        kind = "bound"
    else:
        slopes = np.full(corner.shape, ESTIMATE_SAFETY * np.max(np.abs(np.diff(vals))) / h)
        kind = "estimate"
    upper = corner + slopes * h / 2
    finite = np.isfinite(upper)
    ceiling = float(np.max(upper[finite])) if finite.any() else best
    return MaxResult(
        value=best,
        location=(bx,),
        certified_gap=max(0.0, ceiling - best),
        gap_kind=kind,
        excluded_cells=int(corner.size - np.count_nonzero(finite)),
        history=history,
    )


def quadratic_slope_bound(c2: float, c1: float) -> SlopeBound1D:
    """Exact slope bound per cell for q(x) = c2*x^2 + c1*x + c0."""

    def bound(lo, hi):
        return np.maximum(np.abs(2 * c2 * lo + c1), np.abs(2 * c2 * hi + c1))

    return bound
