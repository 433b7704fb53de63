"""Numerical reproduction of sharp bounds for lam*a_n^2 - a_{2n-1} over close-to-convex functions.

Modules:
    regimes   parameter validation, lambda thresholds and the three-branch bound
    extremal  extreme-point coefficients and the (s, t) torus sweep
    surface   the reduction surfaces F, G, their critical points and edges
    optimize  brute-force grid maximization with certified gaps
    verify    structured checks and the full verification run
    cli       command-line front end
"""

from .regimes import (
    DomainError,
    ProblemParams,
    Regime,
    RegimeError,
    classify,
    theorem_bound,
    thresholds,
)

__all__ = [
    "DomainError",
    "ProblemParams",
    "Regime",
    "RegimeError",
    "classify",
    "theorem_bound",
    "thresholds",
]

__version__ = "0.1.0"
