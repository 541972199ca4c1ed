"""Perm groups via transversal systems, built with Sims's incremental method."""

from .perm import (
    DegreeMismatch,
    InverseRep,
    Perm,
    PermParseError,
    PointOutOfRange,
    apply,
    compose,
    format_cycles,
    inverse,
    largest_moved_point,
    mult_by_inverse_transversal,
    mult_transversal_by_perm,
    parse_cycles,
    power,
)
from .transversal import (
    MembershipTrace,
    TransversalSystem,
    level_stats,
    new_system,
    order,
    sift,
    strong_generators,
)
from .sims import BuildStats, Strategy, algorithm_A, algorithm_B, build, insert_generator
from .families import (
    GeneratorSet,
    brute_force_closure,
    doubling_cycle_perm,
    parse_family_spec,
    sims_example,
    staircase_family,
    transposition_products_family,
    two_generator_family,
)
from .analysis import BoundReport, GrowthFit, check_bounds, growth_fit, minimal_product, theta

__version__ = "0.1.0"
