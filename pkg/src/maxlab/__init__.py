"""Exact uncentered maximal functions of step functions against atomic-plus-density measures."""

from .bounds import (BoundConstants, SearchResult, constants, example_discrete_atoms, example_one_atom,
                     hadwiger_strict, holder_experiment, search_min_ratio)
from .coverings import (CoveringFamily, SunriseReport, covering_selection, overlap_count, solve_average_equation,
                        sunrise_check, unimodal_covering, verify_covering)
from .errors import (InputError, MaxLabError, NoSolution, PreconditionViolated, TailNotCertified,
                     UnsupportedDimension, WindowTooSmall)
from .maximal import (EvaluatedMaximal, MaximalProfile, MaximalValue, evaluate_on_mesh, grid_oracle_at, maximal_at,
                      one_sided_minus_at, one_sided_plus_at, superlevel_set)
from .measure import (Interval, Measure, StepFunction, average, candidate_points, integral_of, measure_of,
                      support_of)
from .quadrature import NormResult, lp_norm_evaluable, lp_norm_step, ratio

__all__ = [
    "BoundConstants", "CoveringFamily", "EvaluatedMaximal", "InputError", "Interval", "MaxLabError",
    "MaximalProfile", "MaximalValue", "Measure", "NoSolution", "NormResult", "PreconditionViolated",
    "SearchResult", "StepFunction", "SunriseReport", "TailNotCertified", "UnsupportedDimension", "WindowTooSmall",
    "average", "candidate_points", "constants", "covering_selection", "evaluate_on_mesh", "example_discrete_atoms",
    "example_one_atom", "grid_oracle_at", "hadwiger_strict", "holder_experiment", "integral_of", "lp_norm_evaluable",
    "lp_norm_step", "maximal_at", "measure_of", "one_sided_minus_at", "one_sided_plus_at", "overlap_count", "ratio",
    "search_min_ratio", "solve_average_equation", "sunrise_check", "superlevel_set", "support_of",
    "unimodal_covering", "verify_covering",
]
