"""Parameter validation, lambda-regime thresholds and the three-branch bound.

Everything here is a closed-form expression in ``n`` and ``lam``; double
precision throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

N_MAX = 10**6


class DomainError(ValueError):
    """Raised when an input lies outside the domain of a formula."""


class RegimeError(DomainError):
    """Raised when ``lam`` is outside the window a formula is stated for."""


def _check_n(n) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 3:
        raise DomainError(f"n must satisfy n >= 3, got {n}")
    if n > N_MAX:
        raise DomainError(f"n must satisfy n <= {N_MAX}, got {n}")
    return n


@dataclass(frozen=True)
class ProblemParams:
    n: int
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "n", _check_n(self.n))
        lam = float(self.lam)
        if not math.isfinite(lam) or lam <= 0:
            raise DomainError(f"lambda must be finite and > 0, got {self.lam!r}")
        object.__setattr__(self, "lam", lam)


class Regime(str, Enum):
    SMALL = "SmallLambda"
    MIDDLE = "MiddleLambda"
    LARGE = "LargeLambda"


@dataclass(frozen=True)
class RegimeThresholds:
    n: int
    lambda_small_max: float
    lambda_large_min: float
    aux_A: float
    aux_B_nminus: float
    aux_B_nplus: float
    aux_B: float
    t_6n2: float
    t_5n1: float
    t_4n2: float
    t_8n: float
    t_small_mirror: float

    def chain_ex5(self) -> list[tuple[str, float]]:
        """The nine-term ordered chain used for the G <= 0 regime."""
        return [
            ("2/(n+1)", self.aux_B_nplus),
            ("2/n", self.aux_B),
            ("2n/(n^2-n+1)", self.lambda_small_max),
            ("2/(n-1)", self.aux_B_nminus),
            ("(4n-2)/n^2", self.t_4n2),
            ("(5n-1)/(n^2+n)", self.t_5n1),
            ("(6n-2)/(n^2+n)", self.t_6n2),
            ("8n/(n+1)^2", self.t_8n),
            ("(10n-2)/(n+1)^2", self.aux_A),
        ]

    def chain_7a(self) -> list[tuple[str, float]]:
        return [
            ("2/(n+1)", self.aux_B_nplus),
            ("2n/(n^2-n+1)", self.lambda_small_max),
            ("(4n-2)/n^2", self.t_4n2),
            ("(6n-2)/(n^2+n)", self.t_6n2),
            ("(10n-2)/(n+1)^2", self.aux_A),
        ]

    def chain_critical(self) -> list[tuple[str, float]]:
        """Ordering used when counting interior critical points."""
        n = self.n
        return [
            ("(3n-sqrt(5n^2-4n))/(n^2+n)", self.t_small_mirror),
            ("2/(n-1)", self.aux_B_nminus),
            ("(5n-1)/(n^2+n)", self.t_5n1),
            ("(3n+sqrt(5n^2-4n))/(n^2+n)", self.lambda_large_min),
            ("(6n-2)/(n^2+n)", self.t_6n2),
            ("2n/(n+1)", 2 * n / (n + 1)),
        ]


def aux_A(n: int) -> float:
    return (10 * n - 2) / (n + 1) ** 2


def aux_B(n: int) -> float:
    return 2 / n


def thresholds(n: int) -> RegimeThresholds:
    n = _check_n(n)
    nf = float(n)
    root = math.sqrt(5 * nf * nf - 4 * nf)
    nn = nf * nf + nf
    return RegimeThresholds(
        n=n,
        lambda_small_max=2 * nf / (nf * nf - nf + 1),
        lambda_large_min=(3 * nf + root) / nn,
        aux_A=aux_A(nf),
        aux_B_nminus=aux_B(nf - 1),
        aux_B_nplus=aux_B(nf + 1),
        aux_B=aux_B(nf),
        t_6n2=(6 * nf - 2) / nn,
        t_5n1=(5 * nf - 1) / nn,
        t_4n2=(4 * nf - 2) / (nf * nf),
        t_8n=8 * nf / (nf + 1) ** 2,
        t_small_mirror=(3 * nf - root) / nn,
    )


def classify(params: ProblemParams) -> Regime:
    th = thresholds(params.n)
    if params.lam <= th.lambda_small_max:
        return Regime.SMALL
    if params.lam < th.lambda_large_min:
        return Regime.MIDDLE
    return Regime.LARGE


def large_bound(n: int, lam: float) -> float:
    return lam * n * n - (2 * n - 1)


def middle_bound(n: int, lam: float) -> float:
    """Middle-regime formula, evaluated without any regime check."""
    root = math.sqrt(n * lam * (2 - lam))
    num = lam * (4 * n * (n + 1) - (3 * n * n + 1) * lam) + 4 * n * (2 - lam) * root
    return num / (lam * (8 * n - lam * (n + 1) ** 2))


def small_bound(n: int) -> float:
    return float(2 * n - 1)


def theorem_bound(params: ProblemParams) -> float:
    """Upper bound on |lam * a_n^2 - a_{2n-1}| over close-to-convex functions."""
    n, lam = params.n, params.lam
    regime = classify(params)
    if regime is Regime.LARGE:
        return large_bound(n, lam)
    if regime is Regime.MIDDLE:
        return middle_bound(n, lam)
    return small_bound(n)


# Closed-form special cases for n = 3 and n = 4, kept as stated so they can
# be compared against the general formula.

def corollary_n3(lam: float) -> float:
    if lam >= (9 + math.sqrt(33)) / 12:
        return 9 * lam - 5
    if lam > 6 / 7:
        r = math.sqrt(3 * lam * (2 - lam))
        return (lam * (12 - 7 * lam) + 3 * (2 - lam) * r) / (lam * (6 - 4 * lam))
    return 5.0


def corollary_n4(lam: float) -> float:
    # Middle clause applied on (8/13, 1); the stated lower limit reads 13/8.
    if lam >= 1:
        return 16 * lam - 7
    if lam > 8 / 13:
        r = math.sqrt(lam * (2 - lam))
        return (lam * (80 - 49 * lam) + 32 * (2 - lam) * r) / (lam * (32 - 25 * lam))
    return 7.0


N4_STATED_MIDDLE_RANGE = (13 / 8, 1.0)
