"""Minimal number of second-stage policies in robust k-adaptability.

Finite scenario sets: exact oracles and the greedy set-cover approximation.
Affine constraint uncertainty: closed-form bounds and exact hyperplane
arrangements in ξ-space.
"""

from .coverage import CoverageSet
from .errors import GuardExceeded, InstanceFormatError, TwoStageInfeasible, UncoverableScenarios
from .generators import (
    builtin_example,
    cardinality_band,
    cardinality_band_affine,
    generate_knapsack,
    recourse_regions,
    reduce_set_cover,
    simplex_units,
)
from .greedy import MinKResult, greedy_min_k, guarantee_ratio, max_coverage
from .model import AffineInstance, Constraint, FiniteInstance, Scenario, UBox, YSpace, validate
from .oracle import (
    brute_force_min_k,
    brute_force_opt_k,
    coverage_set,
    evaluate_k_solution,
    solve_scenario,
    two_stage_value,
)
from .rational import INF
from .serialization import dumps, load, loads, save

__version__ = "0.1.0"
