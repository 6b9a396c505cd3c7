"""Piecewise-linear shadow of the exchange map on the whole plane.

Replacing multiplication by addition and addition by max turns the
birational exchange map into a piecewise-linear homeomorphism of the
plane.  The two factors keep determinant -1 on every linear branch,
their composition keeps determinant +1, and a piecewise-quadratic
function is conserved exactly along orbits.  The dynamics depend on
the product pq the same way as for the birational map: certain
products below 4 give global periodicity, the critical product gives
linear escape, larger products give hyperbolic escape.

Sign conventions.  The composed map is the second factor after the
first.  Where a branch test lands exactly on zero the negative branch
is taken; the positive-part function carries no tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .errors import DomainError, RegimeError
from .params import DEFAULT_TOL, Params, Tolerances, kappa_nu, theta_of

__all__ = [
    "PointPL",
    "SignPair",
    "PolarAngle",
    "mu1_c",
    "mu2_c",
    "mu_c",
    "mu_c_inv",
    "hat_mu1",
    "hat_mu2",
    "reflect_x",
    "reflect_y",
    "f_quad",
    "g_quad",
    "phi",
    "tau1",
    "tau2",
    "tau",
    "chebyshev_u",
    "tau_closed_form",
    "tau_trig_form",
    "polar_angle",
    "detect_period",
    "sign_pair",
    "first_sign_coherent_index",
    "slope_angle_delta",
    "mu1_c_branch_matrices",
    "mu2_c_branch_matrices",
    "mu_c_branch_matrices",
]


@dataclass(frozen=True)
class PointPL:
    """A point of the plane, finite coordinates."""

    s: float
    t: float

    def __post_init__(self):
        s = float(self.s)
        t = float(self.t)
        if not (math.isfinite(s) and math.isfinite(t)):
            raise DomainError(f"coordinates must be finite, got ({self.s!r}, {self.t!r})")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    def as_tuple(self) -> tuple[float, float]:
        return (self.s, self.t)


class SignPair(NamedTuple):
    """Coordinate signs in {-1, 0, 1}, zero meaning inside the zero band."""

    first: int
    second: int


@dataclass(frozen=True)
class PolarAngle:
    """A lifted polar angle together with the branch cut it was lifted over."""

    theta: float
    cut: float


def mu1_c(params: Params, pt: PointPL) -> PointPL:
    """First factor: (s, t) -> (-s, t + p[s]+).

    Not an involution as a plane map (its inverse subtracts p[-s]+
    instead); it is one only in the mutation sense, where the second
    application acts through the sign-flipped exchange block.
    """
    t1 = pt.t + params.p * pt.s if pt.s > 0.0 else pt.t
    return PointPL(-pt.s, t1)


def mu2_c(params: Params, pt: PointPL) -> PointPL:
    """Second factor: (s, t) -> (s + q[t]+, -t)."""
    s1 = pt.s + params.q * pt.t if pt.t > 0.0 else pt.s
    return PointPL(s1, -pt.t)


def mu_c(params: Params, pt: PointPL) -> PointPL:
    """One step of the composed piecewise-linear map, second factor after first."""
    return mu2_c(params, mu1_c(params, pt))


def mu_c_inv(params: Params, pt: PointPL) -> PointPL:
    """Inverse composed step, built from the factor inverses."""
    # undo the second factor, then the first
    s1 = pt.s - params.q * -pt.t if -pt.t > 0.0 else pt.s
    t1 = -pt.t
    t2 = t1 - params.p * -s1 if -s1 > 0.0 else t1
    return PointPL(-s1, t2)


def hat_mu1(params: Params, pt: PointPL) -> PointPL:
    """Plain tropicalization of the first reflection: (s, t) -> (q[t]+ - s, t).

    A genuine involution; conjugating by the coordinate sign flips
    turns the pair of these into the factors above.
    """
    s1 = params.q * pt.t - pt.s if pt.t > 0.0 else -pt.s
    return PointPL(s1, pt.t)


def hat_mu2(params: Params, pt: PointPL) -> PointPL:
    """Plain tropicalization of the second reflection: (s, t) -> (s, p[s]+ - t)."""
    t1 = params.p * pt.s - pt.t if pt.s > 0.0 else -pt.t
    return PointPL(pt.s, t1)


def reflect_x(pt: PointPL) -> PointPL:
    """Sign flip of the first coordinate."""
    return PointPL(-pt.s, pt.t)


def reflect_y(pt: PointPL) -> PointPL:
    """Sign flip of the second coordinate."""
    return PointPL(pt.s, -pt.t)


def _f_raw(p: float, q: float, s: float, t: float) -> float:
    # ps^2 + pq st + qt^2, evaluated as (sqrt(p)s + sqrt(q)t)^2 plus a
    # cross term with coefficient pq - 2 sqrt(pq).  The rewritten
    # coefficient kills the catastrophic cancellation the monomial sum
    # suffers near pq = 4 once orbits grow; pq - 4 is exact there.
    rp = math.sqrt(p)
    rq = math.sqrt(q)
    lin = rp * s + rq * t
    kappa = math.sqrt(p * q)
    coef = kappa * (p * q - 4.0) / (kappa + 2.0)
    return lin * lin + coef * (s * t)


def f_quad(params: Params, pt: PointPL) -> float:
    """The quadratic ps^2 + pq st + qt^2."""
    return _f_raw(params.p, params.q, pt.s, pt.t)


def g_quad(params: Params, pt: PointPL) -> float:
    """The mirror quadratic ps^2 - pq st + qt^2, i.e. f at (s, -t)."""
    return _f_raw(params.p, params.q, pt.s, -pt.t)


def phi(params: Params, pt: PointPL) -> float:
    """The conserved piecewise-quadratic of the composed map.

    Equals the mirror quadratic on the open second quadrant and the
    plain one everywhere else; invariant under mu_c exactly in exact
    arithmetic, to rounding here.
    """
    if pt.s < 0.0 and pt.t > 0.0:
        return g_quad(params, pt)
    return f_quad(params, pt)


def tau1(params: Params, pt: PointPL) -> PointPL:
    """Growth branch of the first factor: (s, t) -> (-s, t + ps)."""
    return PointPL(-pt.s, pt.t + params.p * pt.s)


def tau2(params: Params, pt: PointPL) -> PointPL:
    """Growth branch of the second factor: (s, t) -> (s + qt, -t)."""
    return PointPL(pt.s + params.q * pt.t, -pt.t)


def tau(params: Params, pt: PointPL) -> PointPL:
    """Linearization of the composed map: both factors on their growth branch.

    As a matrix, ((pq - 1, q), (-p, -1)).  Evaluated as the two-stage
    composition so that it agrees with mu_c bit for bit wherever the
    branch quantities are strictly positive.
    """
    return tau2(params, tau1(params, pt))


def chebyshev_u(n: int, x: float) -> float:
    """Second-kind Chebyshev value U_n(x) by upward recurrence.

    Supports n >= -1 with U_{-1} = 0; on the interval (-1, 1) it
    matches sin((n+1) theta)/sin(theta) at x = cos(theta).
    """
    n = int(n)
    if n < -1:
        raise DomainError(f"index must be >= -1, got {n}")
    prev, cur = 0.0, 1.0
    if n == -1:
        return prev
    for _ in range(n):
        prev, cur = cur, 2.0 * x * cur - prev
    return cur


def _cheb_table(x: float, top: int) -> list[float]:
    # values U_{-2}..U_{top} of the recurrence at x; index k lives at [k + 2]
    vals = [-1.0, 0.0]
    for _ in range(top + 1):
        vals.append(2.0 * x * vals[-1] - vals[-2])
    return vals


def tau_closed_form(params: Params, n: int, pt: PointPL) -> tuple[PointPL, PointPL]:
    """n-th iterate of tau, and the first growth branch applied on top.

    Both are linear in the start with coefficients built from
    second-kind Chebyshev values at kappa/2; the index -2 arising at
    n = 0 uses the standard extension to the value -1.  Returns the
    pair (tau^n pt, tau1 tau^n pt).
    """
    n = int(n)
    if n < 0:
        raise DomainError(f"iterate count must be >= 0, got {n}")
    kappa, nu = kappa_nu(params)
    vals = _cheb_table(kappa / 2.0, 2 * n + 1)

    def u(k: int) -> float:
        return vals[k + 2]

    s, t = pt.s, pt.t
    sn = s * u(2 * n) + t * (u(2 * n - 1) / nu)
    tn = -s * (nu * u(2 * n - 1)) - t * u(2 * n - 2)
    tn_t = s * (nu * u(2 * n + 1)) + t * u(2 * n)
    return PointPL(sn, tn), PointPL(-sn, tn_t)


def tau_trig_form(params: Params, n: int, pt: PointPL) -> tuple[PointPL, PointPL]:
    """The same pair through sines of multiples of theta; pq < 4 only."""
    n = int(n)
    if n < 0:
        raise DomainError(f"iterate count must be >= 0, got {n}")
    th = theta_of(params)
    _, nu = kappa_nu(params)
    sth = math.sin(th)
    s, t = pt.s, pt.t
    sn = s * math.sin((2 * n + 1) * th) / sth + t * math.sin(2 * n * th) / (nu * sth)
    tn = -s * nu * math.sin(2 * n * th) / sth - t * math.sin((2 * n - 1) * th) / sth
    tn_t = s * nu * math.sin((2 * n + 2) * th) / sth + t * math.sin((2 * n + 1) * th) / sth
    return PointPL(sn, tn), PointPL(-sn, tn_t)


def polar_angle(params: Params, pt: PointPL) -> PolarAngle:
    """Angle of pt lifted to the branch (cut, cut + 2 pi].

    The cut runs along the half-line sqrt(p) s + sqrt(q) t = 0 with
    s > 0; a point on the cut itself reports cut + 2 pi.  With this
    lift, orbit angles for pq >= 4 never wrap around, and they are
    non-increasing whenever the conserved quadratic of the start is
    non-negative.  Orbits carrying a negative conserved value (possible
    only for pq > 4) instead climb toward the expanding invariant
    direction, so no blanket monotonicity holds for them.
    """
    if pt.s == 0.0 and pt.t == 0.0:
        raise DomainError("polar angle undefined at the origin")
    _, nu = kappa_nu(params)
    cut = math.atan(-nu)
    raw = math.atan2(pt.t, pt.s)
    theta = raw if raw > cut else raw + 2.0 * math.pi
    return PolarAngle(theta, cut)


def detect_period(params: Params, pt: PointPL, max_steps: int, tol: Tolerances = DEFAULT_TOL):
    """Smallest k <= max_steps with the k-th iterate back at the start.

    Return is detected within period_tol scaled by max(1, start norm).
    None when no return occurs within the horizon; iterates leaving
    float range also end the search with None.
    """
    max_steps = int(max_steps)
    if max_steps < 1:
        raise DomainError(f"max_steps must be >= 1, got {max_steps}")
    p, q = params.p, params.q
    s0, t0 = pt.s, pt.t
    bound = tol.period_tol * max(1.0, abs(s0), abs(t0))
    s, t = s0, t0
    for k in range(1, max_steps + 1):
        t1 = t + p * s if s > 0.0 else t
        s = -s + q * t1 if t1 > 0.0 else -s
        t = -t1
        if not (math.isfinite(s) and math.isfinite(t)):
            return None
        if abs(s - s0) <= bound and abs(t - t0) <= bound:
            return k
    return None


def sign_pair(pt: PointPL, scale: float | None = None, tol: Tolerances = DEFAULT_TOL) -> SignPair:
    """Coordinate signs with a zero band of eq_tol times max(1, scale).

    The scale defaults to the point's own infinity norm; pass an
    orbit-wide scale to keep the band consistent along a trajectory.
    """
    ref = max(abs(pt.s), abs(pt.t)) if scale is None else float(scale)
    band = tol.eq_tol * max(1.0, ref)

    def one(v: float) -> int:
        if abs(v) <= band:
            return 0
        return 1 if v > 0.0 else -1

    return SignPair(one(pt.s), one(pt.t))


def first_sign_coherent_index(
    params: Params, pt: PointPL, cap: int = 500, tol: Tolerances = DEFAULT_TOL
):
    """Least N with signs (+, -) for every iterate from N through cap.

    None when no such N exists within the horizon.  The map commutes
    with positive dilations and the sign band is relative, so iterates
    are renormalized when they grow huge; that dodges overflow without
    touching any sign decision.
    """
    cap = int(cap)
    if cap < 0:
        raise DomainError(f"cap must be >= 0, got {cap}")
    p, q = params.p, params.q
    s, t = pt.s, pt.t
    last_bad = -1
    for n in range(cap + 1):
        band = tol.eq_tol * max(1.0, abs(s), abs(t))
        if not (s > band and t < -band):
            last_bad = n
        if n == cap:
            break
        t1 = t + p * s if s > 0.0 else t
        s = -s + q * t1 if t1 > 0.0 else -s
        t = -t1
        norm = max(abs(s), abs(t))
        if norm > 1e100:
            s /= norm
            t /= norm
    return last_bad + 1 if last_bad < cap else None


def slope_angle_delta(params: Params, pt: PointPL, image: PointPL) -> float:
    """Angle swept from pt to image in one step, by the closed formula.

    The numerator is the conserved quadratic at pt and the denominator
    the dot product of the two points.  pt must lie in the open fourth
    quadrant and the image must keep a positive first coordinate,
    which is the configuration the escape regimes settle into.
    """
    if not (pt.s > 0.0 and pt.t < 0.0):
        raise DomainError("pt must lie in the open fourth quadrant")
    if not image.s > 0.0:
        raise DomainError("image must have a positive first coordinate")
    num = f_quad(params, pt)
    den = pt.s * image.s + pt.t * image.t
    return math.atan2(num, den)


def mu1_c_branch_matrices(params: Params):
    """Linear branches of the first factor, s > 0 branch first; dets are -1."""
    p = params.p
    return (
        ((-1.0, 0.0), (p, 1.0)),
        ((-1.0, 0.0), (0.0, 1.0)),
    )


def mu2_c_branch_matrices(params: Params):
    """Linear branches of the second factor, t > 0 branch first; dets are -1."""
    q = params.q
    return (
        ((1.0, q), (0.0, -1.0)),
        ((1.0, 0.0), (0.0, -1.0)),
    )


def mu_c_branch_matrices(params: Params):
    """Linear branches of the composed map; every determinant is +1.

    Order: (s > 0, intermediate t > 0), (s > 0, not), (s <= 0, t > 0),
    (s <= 0, not).  The determinants are exact even in floating point:
    the first branch's det works out to fl(pq) - (fl(pq) - 1), which
    is exactly 1 for any representable product.
    """
    p, q = params.p, params.q
    return (
        ((p * q - 1.0, q), (-p, -1.0)),
        ((-1.0, 0.0), (-p, -1.0)),
        ((-1.0, q), (0.0, -1.0)),
        ((-1.0, 0.0), (0.0, -1.0)),
    )
