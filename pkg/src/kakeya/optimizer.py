"""Constrained parameter search for the two-case bound.

The free parameters are (a, r0, lambda); at each point the split ``p`` is
chosen so that the Case I and Case II coefficients balance, and the
objective is

    min( balanced case value,  a/(2*pi) )

since a/(2*pi) is the standing trivial bound that caps how much the case
machinery may claim.  The search is a deterministic coarse grid followed
by coordinate-wise golden-section refinement; ties in the objective (it
plateaus at a/(2*pi) once the balanced value exceeds it) break toward the
larger balanced value, which pins the refinement to the constrained
optimum instead of an arbitrary plateau point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import bounds
from .bounds import RLAMBDA_REPRODUCING, BoundBreakdown, BoundParams
from .errors import CaseIIInfeasible, DomainError, EmptyFeasibleSet

__all__ = ["SearchBox", "OptimizationResult", "balance_p", "optimize", "refine_iterative"]

_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchBox:
    """Closed parameter intervals with grid resolution and refinement tol."""

    a: tuple[float, float]
    r0: tuple[float, float]
    lam: tuple[float, float]
    grid: int = 32
    tol: float = 1e-7

    def __post_init__(self):
        for name in ("a", "r0", "lam"):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
                raise DomainError(f"invalid {name} interval [{lo}, {hi}]")
        if self.a[1] >= self.r0[0]:
            raise DomainError("a interval must lie strictly below the r0 interval")
        if self.a[0] <= 0.0 or self.r0[1] >= 0.5:
            raise DomainError("intervals must stay inside (0, 1/2)")
        if self.grid < 2:
            raise DomainError(f"grid must be >= 2, got {self.grid}")
        if self.tol <= 0.0:
            raise DomainError(f"tol must be > 0, got {self.tol}")


@dataclass(frozen=True)
class OptimizationResult:
    best: BoundParams
    breakdown: BoundBreakdown
    balanced_p: float
    trace: list[tuple[BoundParams, float]] = field(default_factory=list)


def balance_p(
    a: float,
    r0: float,
    lam: float,
    tol: float = 1e-10,
    convention: str = RLAMBDA_REPRODUCING,
) -> float:
    """The split p at which the Case I and Case II coefficients agree.

    With case_i(p) = K0 + p*K1 and case_ii(p) = (1-p)*K2 the balance
    point is p = (K2 - K0)/(K1 + K2), clamped to [0, 1] (a clamp at 0
    means Case I already exceeds Case II with no cross-section help).
    ``tol`` is the quadrature tolerance for K1's integral.
    """
    _, _, p = _balanced_point(a, r0, lam, tol, convention)
    return p


def _balanced_point(a, r0, lam, quad_tol, convention):
    """(objective, balanced case value, p) at one (a, r0, lambda) point."""
    params = BoundParams(a=a, r0=r0, p=0.0, lam=lam)
    derived = bounds.derive_params(params, convention)
    k0, k1, _, _ = bounds._case_i_terms(params, quad_tol, convention)
    _, c_r1m1 = bounds._case_ii_from_derived(a, 0.0, derived)
    k2 = 0.25 * c_r1m1
    denom = k1 + k2
    if denom <= 0.0:
        raise CaseIIInfeasible("degenerate balance: K1 + K2 <= 0")
    p = min(1.0, max(0.0, (k2 - k0) / denom))
    value = min(k0 + p * k1, (1.0 - p) * k2)
    return min(value, a / (2.0 * math.pi)), value, p


def optimize(
    box: SearchBox,
    quad_tol: float = 1e-10,
    convention: str = RLAMBDA_REPRODUCING,
) -> OptimizationResult:
    """Deterministic grid + coordinate golden-section maximization.

    Evaluates the balanced objective on a grid**3 lattice over the box,
    then refines coordinate-by-coordinate until a full pass improves the
    objective by less than ``box.tol``.  Infeasible points (Case II
    undefined) are skipped; if every lattice point is infeasible,
    EmptyFeasibleSet is raised.
    """

    def evaluate(a, r0, lam):
        try:
            return _balanced_point(a, r0, lam, quad_tol, convention)
        except (CaseIIInfeasible, DomainError):
            return None

    def axis_values(interval):
        lo, hi = interval
        if hi <= lo:
            return [lo]
        n = box.grid
        return [lo + (hi - lo) * k / (n - 1) for k in range(n)]

    best = None  # ((objective, balanced value), (a, r0, lam), p)
    for a in axis_values(box.a):
        for r0 in axis_values(box.r0):
            for lam in axis_values(box.lam):
                got = evaluate(a, r0, lam)
                if got is None:
                    continue
                phi, value, p = got
                if best is None or (phi, value) > best[0]:
                    best = ((phi, value), (a, r0, lam), p)
    if best is None:
        raise EmptyFeasibleSet("every grid point of the search box was infeasible")

    trace = [(_params_at(best[1], best[2]), best[0][0])]

    def line_key(point):
        got = evaluate(*point)
        return (-math.inf, -math.inf) if got is None else (got[0], got[1])

    key, point, p = best[0], best[1], best[2]
    for _ in range(64):  # passes; tol normally stops the loop much earlier
        prev_phi = key[0]
        for coord, interval in ((0, box.a), (1, box.r0), (2, box.lam)):
            if interval[1] > interval[0]:
                key, point = _golden_max(line_key, point, coord, interval, key)
        phi, value, p = evaluate(*point)
        trace.append((_params_at(point, p), phi))
        if phi - prev_phi < box.tol:
            break

    best_params = _params_at(point, p)
    breakdown = bounds.theorem_bound(best_params, quad_tol, convention)
    return OptimizationResult(
        best=best_params, breakdown=breakdown, balanced_p=p, trace=trace
    )


def _params_at(point, p):
    a, r0, lam = point
    return BoundParams(a=a, r0=r0, p=p, lam=lam)


def _golden_max(line_key, point, coord, interval, key, xtol=1e-8):
    """Golden-section ascent of one coordinate; returns (key, point)."""

    def key_at(x):
        trial = list(point)
        trial[coord] = x
        return line_key(tuple(trial))

    lo, hi = interval
    x1 = hi - _INV_GOLDEN * (hi - lo)
    x2 = lo + _INV_GOLDEN * (hi - lo)
    k1, k2 = key_at(x1), key_at(x2)
    while hi - lo > xtol:
        if k1 < k2:
            lo, x1, k1 = x1, x2, k2
            x2 = lo + _INV_GOLDEN * (hi - lo)
            k2 = key_at(x2)
        else:
            hi, x2, k2 = x2, x1, k1
            x1 = hi - _INV_GOLDEN * (hi - lo)
            k1 = key_at(x1)
    x_best, k_best = (x1, k1) if k1 >= k2 else (x2, k2)
    if k_best > key:
        out = list(point)
        out[coord] = x_best
        return k_best, tuple(out)
    return key, point


def refine_iterative(
    start: BoundParams,
    max_iter: int,
    tol: float = 1e-9,
    quad_tol: float = 1e-10,
    convention: str = RLAMBDA_REPRODUCING,
) -> list[float]:
    """Iteratively recycle the Case I bound as an inner-area bound.

    Shrinking the whole Case I configuration from the disk of radius r1
    into the disk of radius a scales its area bound by (a/r1)^2; feeding
    that inner bound back through the inner/outer combination at r0 adds
    (1 - f(r0)/(2 r0^2)) * (a/r1)^2 * case_i to Case I.  The resulting
    sequence of global bounds is monotone nondecreasing and contracts
    geometrically; iteration stops after ``max_iter`` steps or when the
    increment drops below ``tol``.
    """
    if max_iter < 0:
        raise DomainError(f"max_iter must be >= 0, got {max_iter}")
    breakdown = bounds.theorem_bound(start, quad_tol, convention)
    derived = bounds.derive_params(start, convention)
    shrink = (start.a / derived.r1) ** 2
    coeff = max(0.0, 1.0 - breakdown.f_r0 / (2.0 * start.r0 * start.r0))
    values = [breakdown.final]
    case_i = breakdown.case_i
    base_case_i = breakdown.case_i
    for _ in range(max_iter):
        case_i = base_case_i + coeff * shrink * case_i
        values.append(min(case_i, breakdown.case_ii, breakdown.half_a))
        if values[-1] - values[-2] < tol:
            break
    return values
