"""Lower-bound machinery for star-shaped Kakeya sets.

Library layout:

- :mod:`kakeya.geom`: needle triangles, circular clipping, arcs, and the
  closed-form cross-section geometry.
- :mod:`kakeya.bounds`: the rate functions, the Case I / Case II bounds,
  and the assembled breakdown with its published constants.
- :mod:`kakeya.optimizer`: balanced-split parameter search and the
  iterative inner-bound refinement.
- :mod:`kakeya.oracle`: seeded brute-force checks of every geometric
  claim the bounds rest on.
- :mod:`kakeya.cli`: the ``kakeya`` command.
"""

from .bounds import (
    BoundBreakdown,
    BoundParams,
    DerivedParams,
    Measure1D,
    RLAMBDA_PAPER_LITERAL,
    RLAMBDA_REPRODUCING,
    THEOREM_DEFAULTS,
    case_i_bound,
    case_i_integral,
    case_ii_bound,
    cunningham_bound,
    theorem_bound,
)
from .errors import (
    BracketError,
    CaseIIInfeasible,
    DomainError,
    EmptyFeasibleSet,
    KakeyaError,
    QuadratureError,
)
from .geom import Arc, DirectionInterval, NeedleTriangle, Point, make_triangle
from .optimizer import OptimizationResult, SearchBox, balance_p, optimize, refine_iterative
from .oracle import CheckId, CheckReport, McEstimate, find_h_threshold, mc_area, run_check

__version__ = "0.1.0"

__all__ = [
    "Arc",
    "BoundBreakdown",
    "BoundParams",
    "BracketError",
    "CaseIIInfeasible",
    "CheckId",
    "CheckReport",
    "DerivedParams",
    "DirectionInterval",
    "DomainError",
    "EmptyFeasibleSet",
    "KakeyaError",
    "McEstimate",
    "Measure1D",
    "NeedleTriangle",
    "OptimizationResult",
    "Point",
    "QuadratureError",
    "RLAMBDA_PAPER_LITERAL",
    "RLAMBDA_REPRODUCING",
    "SearchBox",
    "THEOREM_DEFAULTS",
    "balance_p",
    "case_i_bound",
    "case_i_integral",
    "case_ii_bound",
    "cunningham_bound",
    "find_h_threshold",
    "make_triangle",
    "mc_area",
    "optimize",
    "refine_iterative",
    "run_check",
    "theorem_bound",
]
