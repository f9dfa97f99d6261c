"""Exact combinatorial simulation of semistable reduction for fibered surfaces."""
from .basechange import choose_e, component_cover, local_model, pullback_fiber, semistable_reduction
from .errors import EngineError, InconsistentConfiguration, InputError, UnsupportedInput
from .fiber import (
    Edge,
    FiberComponent,
    FiberGraph,
    PointSingularity,
    chi_top,
    classify,
    fiber_genus,
    fred_square,
    pa_red,
    self_intersections,
)
from .heights import (
    AlgebraicPoint,
    SectionLocalData,
    bound_6,
    bound_7,
    check_canonical_class,
    check_theorem_A,
    epsilon_q,
    miyaoka_check,
    miyaoka_m,
    point_invariants,
    validate_fibration,
)
from .invariants import (
    FiberEntry,
    FibrationSummary,
    check_lemma_1_5,
    check_lemma_1_6,
    fiber_invariants,
    global_invariants,
)
from .lattice import DivisorClass, ExceptionalConfig, IntersectionLattice, blow_up, pair, rational_canonical
from .resolution import alpha, check_resolution_bounds, resolve
from .singularities import ClusterPoint, SingularityDescriptor

__version__ = "0.1.0"

__all__ = [
    "AlgebraicPoint",
    "ClusterPoint",
    "DivisorClass",
    "Edge",
    "EngineError",
    "ExceptionalConfig",
    "FiberComponent",
    "FiberEntry",
    "FiberGraph",
    "FibrationSummary",
    "InconsistentConfiguration",
    "InputError",
    "IntersectionLattice",
    "PointSingularity",
    "SectionLocalData",
    "SingularityDescriptor",
    "UnsupportedInput",
    "alpha",
    "blow_up",
    "bound_6",
    "bound_7",
    "check_canonical_class",
    "check_lemma_1_5",
    "check_lemma_1_6",
    "check_resolution_bounds",
    "check_theorem_A",
    "chi_top",
    "choose_e",
    "classify",
    "component_cover",
    "epsilon_q",
    "fiber_genus",
    "fiber_invariants",
    "fred_square",
    "global_invariants",
    "local_model",
    "miyaoka_check",
    "miyaoka_m",
    "pa_red",
    "pair",
    "point_invariants",
    "pullback_fiber",
    "rational_canonical",
    "resolve",
    "self_intersections",
    "semistable_reduction",
    "validate_fibration",
]
