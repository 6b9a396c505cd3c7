"""Small floating-point helpers used across the package.

Everything is plain 64-bit arithmetic; no extended or arbitrary
precision is used anywhere.  That is a deliberate policy: the maps are
iterated millions of times and the tests pin down exactly what double
precision can and cannot deliver.
"""
from __future__ import annotations

import math

__all__ = [
    "EQ_TOL",
    "PERIOD_TOL",
    "JAC_STEP",
    "close_rel",
    "ulp_gap",
    "fpow",
    "softplus",
    "det2",
]

# Package-wide defaults.  Relative tolerances are always applied as
# tol * max(1, magnitudes), so they act absolutely near the origin.
EQ_TOL = 1e-12
PERIOD_TOL = 1e-9
JAC_STEP = 1e-6


def close_rel(a: float, b: float, tol: float) -> bool:
    """True when |a - b| <= tol * max(1, |a|, |b|)."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def ulp_gap(a: float, b: float) -> float:
    """Distance from a to b in units of the larger magnitude's ulp."""
    if a == b:
        return 0.0
    return abs(a - b) / math.ulp(max(abs(a), abs(b)))


def fpow(base: float, expo: float) -> float:
    """base ** expo for positive base, overflow mapped to inf.

    Small integer exponents dispatch to repeated multiplication, which
    is both faster and at least as accurate as the general pow; the
    generic path is the libm power.  Python raises OverflowError from
    float ** instead of returning inf, which would tear holes in long
    iterations, so that case is normalized here.
    """
    n = int(expo) if -4.0 <= expo <= 4.0 else None
    if n is not None and expo == n:
        if n < 0:
            base = 1.0 / base
            n = -n
        r = 1.0
        for _ in range(n):
            r *= base
        return r
    try:
        return base ** expo
    except OverflowError:
        return math.inf


def softplus(z: float) -> float:
    """log(1 + e^z) without overflow at either end."""
    if z > 0.0:
        return z + math.log1p(math.exp(-z))
    return math.log1p(math.exp(z))


def det2(m) -> float:
    """Determinant of a 2x2 matrix given as ((a, b), (c, d))."""
    (a, b), (c, d) = m
    return a * d - b * c
