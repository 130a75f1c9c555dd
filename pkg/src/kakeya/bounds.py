"""Closed-form bound functions and the assembled Case I / Case II bounds.

Everything proportional to pi is handled as a *coefficient of pi* so the
published constants stay directly comparable (1/108, 1/98 = 0.0102040...,
0.010205..., 0.0107..., 0.01030...).  The split works with four user
parameters: the needle-height cap ``a``, the cutoff radius ``r0``, the
direction-proportion split ``p``, and the interpolation weight ``lambda``
fixing an intermediate radius ``r_lambda`` between ``a`` and ``r0``.
Case I covers direction sets whose triangles stay inside the disk of
radius ``r1``; Case II covers the complement via needles clear of the
disk of radius ``r1 - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import geom
from .errors import CaseIIInfeasible, DomainError, QuadratureError

__all__ = [
    "RLAMBDA_REPRODUCING",
    "RLAMBDA_PAPER_LITERAL",
    "BoundParams",
    "DerivedParams",
    "BoundBreakdown",
    "Measure1D",
    "THEOREM_DEFAULTS",
    "UPPER_BOUND_COEFF",
    "exterior_area_rate",
    "outside_area_rate",
    "direction_ratio_cap",
    "derive_params",
    "adaptive_simpson",
    "g_branch_kinks",
    "case_i_integral",
    "case_i_bound",
    "case_ii_bound",
    "theorem_bound",
    "cunningham_bound",
    "direction_set_area_bound",
    "combined_area_bound",
    "outside_area_bound",
    "cross_section_bound",
]

# Conventions for the intermediate radius r_lambda.  The displayed formula
# r_lambda = lambda*a + (1-lambda)*r0 does not reproduce the published
# Case II constant (it gives ~0.00229 instead of ~0.0107 at the default
# parameters); the reversed weights do, and are the default here.  Both
# remain available behind this switch.
RLAMBDA_REPRODUCING = "reproducing"
RLAMBDA_PAPER_LITERAL = "paper-literal"
_CONVENTIONS = (RLAMBDA_REPRODUCING, RLAMBDA_PAPER_LITERAL)

# Smallest-area constant of the known tricuspoid-style constructions,
# (5 - 2*sqrt(2))/24 as a coefficient of pi: every valid lower bound must
# stay below it.
UPPER_BOUND_COEFF = (5.0 - 2.0 * math.sqrt(2.0)) / 24.0


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundParams:
    """User parameters of the two-case split.

    ``a``: cap on the needle height, in (0, 1/2).
    ``r0``: cutoff radius, in (a, 1/2).
    ``p``: direction-proportion split, in [0, 1].
    ``lam``: interpolation weight for r_lambda, in [0, 1].
    """

    a: float
    r0: float
    p: float
    lam: float

    def __post_init__(self):
        for name in ("a", "r0", "p", "lam"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not self.a < self.r0:
            raise DomainError(f"a must be < r0, got a={self.a}, r0={self.r0}")
        if not 0.0 < self.a < 0.5:
            raise DomainError(f"a must lie in (0, 1/2), got {self.a}")
        if not self.r0 < 0.5:
            raise DomainError(f"r0 must be < 1/2, got {self.r0}")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p}")
        if not 0.0 <= self.lam <= 1.0:
            raise DomainError(f"lambda must lie in [0, 1], got {self.lam}")


@dataclass(frozen=True)
class DerivedParams:
    """Quantities derived from BoundParams under an r_lambda convention."""

    r_lambda: float
    delta1: float
    r1: float
    g_mid: float
    case_ii_feasible: bool


@dataclass(frozen=True)
class BoundBreakdown:
    """Case I / Case II / final values, all as coefficients of pi."""

    case_i: float
    case_ii: float
    half_a: float
    final: float
    integral_value: float
    f_r0: float
    c_r1m1: float


@dataclass(frozen=True)
class Measure1D:
    """One-dimensional (outer) measure of a direction set in [0, pi)."""

    value: float

    def __post_init__(self):
        if not 0.0 <= self.value <= math.pi:
            raise DomainError(f"direction measure must lie in [0, pi], got {self.value}")

    def __float__(self) -> float:
        return self.value


# Parameters of the headline pi/98 bound: a = pi/49, r0 = 1/4, p = 9/10,
# lambda = 9/10.
THEOREM_DEFAULTS = BoundParams(a=math.pi / 49.0, r0=0.25, p=0.9, lam=0.9)


def _measure(meas: Measure1D | float) -> float:
    value = float(meas)
    if not 0.0 <= value <= math.pi:
        raise DomainError(f"direction measure must lie in [0, pi], got {value}")
    return value


# ---------------------------------------------------------------------------
# Rate functions
# ---------------------------------------------------------------------------

def exterior_area_rate(r: float) -> float:
    """Outer-area rate r*(2r - 1)^2 / 2, valid on [0, 1/2], maximal at 1/6."""
    if not 0.0 <= r <= 0.5:
        raise DomainError(f"r must lie in [0, 1/2], got {r}")
    return 0.5 * r * (2.0 * r - 1.0) ** 2


def outside_area_rate(r: float, a: float) -> float:
    """Area rate a / (2*asin(a/r)) for needles clear of the disk of radius r.

    This is the minimum of x / (2*asin(x/r)) over heights x in (0, a];
    at a = r it degenerates to a/pi.
    """
    if a <= 0.0:
        raise DomainError(f"a must be > 0, got {a}")
    if a > r:
        raise DomainError(f"need a <= r, got a={a}, r={r}")
    return a / (2.0 * math.asin(a / r))


def direction_ratio_cap(r: float, derived: DerivedParams) -> float:
    """Cap g(r) on (admissible directions) / (central angle) for arcs on S_r:

        g(r) = max( (1+2r)/(1-2r),
                    (1+2*r_lambda)/(1-2*r_lambda),
                    pi / (pi/2 - atan(2r)) )
    """
    if not 0.0 < r < 0.5:
        raise DomainError(f"r must lie in (0, 1/2), got {r}")
    return max(
        (1.0 + 2.0 * r) / (1.0 - 2.0 * r),
        derived.g_mid,
        math.pi / (0.5 * math.pi - math.atan(2.0 * r)),
    )


def derive_params(
    params: BoundParams, convention: str = RLAMBDA_REPRODUCING
) -> DerivedParams:
    """Resolve r_lambda, the height cap delta1, and the needle reach r1.

    Under the default convention r_lambda = lam*r0 + (1-lam)*a; the
    ``paper-literal`` convention swaps the weights.  Case II infeasibility
    (r1 - 1 <= a) is recorded as a flag, not raised here.
    """
    if convention not in _CONVENTIONS:
        raise DomainError(f"unknown r_lambda convention: {convention!r}")
    if convention == RLAMBDA_REPRODUCING:
        r_lambda = params.lam * params.r0 + (1.0 - params.lam) * params.a
    else:
        r_lambda = params.lam * params.a + (1.0 - params.lam) * params.r0
    delta1 = geom.outside_distance_cap(r_lambda, params.a)
    r1 = geom.far_endpoint_distance(delta1, r_lambda)
    g_mid = (1.0 + 2.0 * r_lambda) / (1.0 - 2.0 * r_lambda)
    return DerivedParams(
        r_lambda=r_lambda,
        delta1=delta1,
        r1=r1,
        g_mid=g_mid,
        case_ii_feasible=r1 - 1.0 > params.a,
    )


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

def adaptive_simpson(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
    max_depth: int = 48,
) -> float:
    """Adaptive Simpson quadrature with absolute tolerance ``tol``.

    Uses the standard estimate |S2 - S1|/15 per panel with Richardson
    extrapolation.  Raises QuadratureError if a panel still misses its
    local tolerance at ``max_depth``.
    """
    if tol <= 0.0:
        raise DomainError(f"tol must be > 0, got {tol}")
    if hi <= lo:
        return 0.0

    def simpson(fa, fm, fb, width):
        return width / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(x0, x2, f0, f1, f2, whole, tol, depth):
        x1 = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + x1)
        xr = 0.5 * (x1 + x2)
        fl = func(xl)
        fr = func(xr)
        left = simpson(f0, fl, f1, x1 - x0)
        right = simpson(f1, fr, f2, x2 - x1)
        err = (left + right - whole) / 15.0
        if abs(err) <= tol:
            return left + right + err
        if depth >= max_depth:
            raise QuadratureError(
                f"no convergence on [{x0}, {x2}] at depth {max_depth} "
                f"(residual {abs(err):.3e} > {tol:.3e})"
            )
        return recurse(x0, x1, f0, fl, f1, left, 0.5 * tol, depth + 1) + recurse(
            x1, x2, f1, fr, f2, right, 0.5 * tol, depth + 1
        )

    f_lo, f_mid, f_hi = func(lo), func(0.5 * (lo + hi)), func(hi)
    whole = simpson(f_lo, f_mid, f_hi, hi - lo)
    return recurse(lo, hi, f_lo, f_mid, f_hi, whole, tol, 0)


def _bisect_root(func, lo, hi, tol=1e-13, max_iter=200):
    f_lo = func(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            return mid
        f_mid = func(mid)
        if (f_lo <= 0.0) == (f_mid <= 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _branch_crossings(lo: float, hi: float, derived: DerivedParams) -> list[float]:
    """Radii in (lo, hi) where two components of the g-cap cross (to 1e-13)."""
    comps = (
        lambda r: (1.0 + 2.0 * r) / (1.0 - 2.0 * r),
        lambda r: derived.g_mid,
        lambda r: math.pi / (0.5 * math.pi - math.atan(2.0 * r)),
    )
    roots: list[float] = []
    n_scan = 128
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            diff = lambda r, fi=comps[i], fj=comps[j]: fi(r) - fj(r)
            prev_x, prev_f = lo, diff(lo)
            for k in range(1, n_scan + 1):
                x = lo + (hi - lo) * k / n_scan
                f = diff(x)
                if prev_f == 0.0:
                    roots.append(prev_x)
                elif (prev_f < 0.0) != (f < 0.0):
                    roots.append(_bisect_root(diff, prev_x, x))
                prev_x, prev_f = x, f
    roots = sorted(set(x for x in roots if lo < x < hi))
    return roots


def g_branch_kinks(
    params: BoundParams,
    convention: str = RLAMBDA_REPRODUCING,
    lo: float | None = None,
    hi: float | None = None,
) -> list[float]:
    """Radii where the active branch of the g-cap switches, to 1e-13.

    The search range defaults to (a, r0); crossings where the maximum does
    not actually change hands are filtered out.
    """
    derived = derive_params(params, convention)
    lo = params.a if lo is None else lo
    hi = params.r0 if hi is None else hi
    kinks = []
    eps = 1e-9
    for x in _branch_crossings(lo, hi, derived):
        left = _argmax_branch(max(lo, x - eps), derived)
        right = _argmax_branch(min(hi, x + eps), derived)
        if left != right:
            kinks.append(x)
    return kinks


def _argmax_branch(r: float, derived: DerivedParams) -> int:
    vals = (
        (1.0 + 2.0 * r) / (1.0 - 2.0 * r),
        derived.g_mid,
        math.pi / (0.5 * math.pi - math.atan(2.0 * r)),
    )
    return max(range(3), key=lambda i: vals[i])


def case_i_integral(
    params: BoundParams,
    tol: float = 1e-10,
    convention: str = RLAMBDA_REPRODUCING,
) -> float:
    """Integral of r / g(r) over [a, r0] by kink-split adaptive Simpson.

    The integrand is piecewise smooth (g is a max of three smooth
    branches), so the interval is subdivided at the branch crossings,
    located by bisection to 1e-13, before integrating each piece.
    """
    derived = derive_params(params, convention)
    return _case_i_integral_derived(params.a, params.r0, derived, tol)


def _case_i_integral_derived(a, r0, derived, tol):
    if r0 <= a:
        return 0.0
    integrand = lambda r: r / direction_ratio_cap(r, derived)
    cuts = [a] + _branch_crossings(a, r0, derived) + [r0]
    n_pieces = len(cuts) - 1
    return sum(
        adaptive_simpson(integrand, cuts[i], cuts[i + 1], tol / n_pieces)
        for i in range(n_pieces)
    )


# ---------------------------------------------------------------------------
# Case bounds
# ---------------------------------------------------------------------------

def _case_i_terms(params, tol, convention):
    """(K0, K1) with case_i(p) = K0 + p*K1, both coefficients of pi."""
    if params.r0 < 0.15:
        raise DomainError(f"r0 must be >= 0.15 for the outer-area rate, got {params.r0}")
    f_r0 = exterior_area_rate(params.r0)
    integral = case_i_integral(params, tol, convention)
    k0 = 0.25 * f_r0
    k1 = (1.0 - f_r0 / (2.0 * params.r0 * params.r0)) / 3.0 * integral
    return k0, k1, f_r0, integral


def case_i_bound(
    params: BoundParams,
    tol: float = 1e-10,
    convention: str = RLAMBDA_REPRODUCING,
) -> float:
    """Case I coefficient of pi:

        p/3 * (1 - f(r0)/(2 r0^2)) * integral(r/g) + f(r0)/4.
    """
    k0, k1, _, _ = _case_i_terms(params, tol, convention)
    return k0 + params.p * k1


def _case_ii_from_derived(a: float, p: float, derived: DerivedParams) -> tuple[float, float]:
    if not derived.case_ii_feasible:
        raise CaseIIInfeasible(
            f"r1 - 1 = {derived.r1 - 1.0} <= a = {a}: needle-outside rate undefined"
        )
    c_r1m1 = outside_area_rate(derived.r1 - 1.0, a)
    return (1.0 - p) / 4.0 * c_r1m1, c_r1m1


def case_ii_bound(
    params: BoundParams, convention: str = RLAMBDA_REPRODUCING
) -> float:
    """Case II coefficient of pi: (1 - p)/4 * c(r1 - 1)."""
    derived = derive_params(params, convention)
    value, _ = _case_ii_from_derived(params.a, params.p, derived)
    return value


def theorem_bound(
    params: BoundParams,
    tol: float = 1e-10,
    convention: str = RLAMBDA_REPRODUCING,
) -> BoundBreakdown:
    """Full breakdown: final = min(case_i, case_ii, a/(2*pi)).

    The a/(2*pi) term is the trivial bound from any needle at height >= a;
    at the default parameters it equals exactly 1/98.
    """
    derived = derive_params(params, convention)
    k0, k1, f_r0, integral = _case_i_terms(params, tol, convention)
    case_i = k0 + params.p * k1
    case_ii, c_r1m1 = _case_ii_from_derived(params.a, params.p, derived)
    half_a = params.a / (2.0 * math.pi)
    return BoundBreakdown(
        case_i=case_i,
        case_ii=case_ii,
        half_a=half_a,
        final=min(case_i, case_ii, half_a),
        integral_value=integral,
        f_r0=f_r0,
        c_r1m1=c_r1m1,
    )


def cunningham_bound() -> float:
    """The classical constant 1/108 (coefficient of pi): f(1/6)/4."""
    return 0.25 * exterior_area_rate(1.0 / 6.0)


# ---------------------------------------------------------------------------
# Area bounds from direction measures (absolute areas, not pi-coefficients)
# ---------------------------------------------------------------------------

def direction_set_area_bound(meas_a: Measure1D | float, r: float) -> float:
    """Area swept by triangles over a direction set: meas(A)/4 * f(r).

    Requires r >= 0.15, where the outer-area quotient is minimized in the
    flat limit.
    """
    value = _measure(meas_a)
    if r < 0.15:
        raise DomainError(f"r must be >= 0.15, got {r}")
    return 0.25 * value * exterior_area_rate(r)


def combined_area_bound(meas_a: Measure1D | float, r: float, a0: float) -> float:
    """Inner/outer combination: meas(A)/4 * f(r) + (1 - f(r)/(2r^2)) * a0.

    ``a0`` is any known lower bound for the inner-part area.  The
    coefficient of a0 is clamped at 0 if negative, which only drops a
    nonnegative term and keeps the bound valid.
    """
    value = _measure(meas_a)
    if r < 0.15:
        raise DomainError(f"r must be >= 0.15, got {r}")
    if a0 < 0.0:
        raise DomainError(f"a0 must be >= 0, got {a0}")
    f_r = exterior_area_rate(r)
    coeff = max(0.0, 1.0 - f_r / (2.0 * r * r))
    return 0.25 * value * f_r + coeff * a0


def outside_area_bound(meas_a: Measure1D | float, r: float, a: float) -> float:
    """Area bound for needles clear of the disk: meas(A)/4 * c(r)."""
    value = _measure(meas_a)
    return 0.25 * value * outside_area_rate(r, a)


def cross_section_bound(p: float, r: float, derived: DerivedParams) -> float:
    """Per-radius cross-section length bound: p * (pi/3) * r / g(r)."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    return p * (math.pi / 3.0) * r / direction_ratio_cap(r, derived)
