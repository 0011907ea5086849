"""Minimum-diameter selection for uncertain planar and low-dimensional point sets."""

from .errors import (
    GridTooFine,
    HoleTopology,
    InstanceError,
    IterationLimit,
    MindiamError,
    NotSeparable,
    OracleTooLarge,
    PolygonError,
    PreconditionError,
    RegionOutsideFocus,
)
from .geometry import (
    BoundingBox,
    ConvexPolygon,
    DiameterResult,
    OrientedLine,
    bounding_box,
    clip_convex,
    contains,
    diameter,
    dist,
    inner_tangents,
    subtract_and_triangulate,
)
from .imprecise import (
    FocusRect,
    PipelineReport,
    SeparabilityCert,
    common_point,
    contact_separability,
    contact_separability_set,
    decompose,
    discretize,
    focus_rectangle,
    max_separability,
    max_separability_set,
    min_diam_eps,
    solve,
)
from .instances import HalfSpaceRegion, ImpreciseInstance, IndecisiveInstance, Selection
from .io import parse_instance, serialize_instance
from .lp import LinearProgram, LpSolution, LpStatus, build_lp3, region_constraints, simplex_solve, sqrt_d_approx
from .mindcs import ApproxResult, Grid, brute_force, diameter_apx, in_lens, is_c_legal, min_diameter_apx
from .oracle import sampling_oracle

__all__ = [
    "ApproxResult",
    "BoundingBox",
    "ConvexPolygon",
    "DiameterResult",
    "FocusRect",
    "Grid",
    "GridTooFine",
    "HalfSpaceRegion",
    "HoleTopology",
    "ImpreciseInstance",
    "IndecisiveInstance",
    "InstanceError",
    "IterationLimit",
    "LinearProgram",
    "LpSolution",
    "LpStatus",
    "MindiamError",
    "NotSeparable",
    "OracleTooLarge",
    "OrientedLine",
    "PipelineReport",
    "PolygonError",
    "PreconditionError",
    "RegionOutsideFocus",
    "Selection",
    "SeparabilityCert",
    "bounding_box",
    "brute_force",
    "build_lp3",
    "clip_convex",
    "common_point",
    "contact_separability",
    "contact_separability_set",
    "contains",
    "decompose",
    "diameter",
    "diameter_apx",
    "discretize",
    "dist",
    "focus_rectangle",
    "in_lens",
    "inner_tangents",
    "is_c_legal",
    "max_separability",
    "max_separability_set",
    "min_diam_eps",
    "min_diameter_apx",
    "parse_instance",
    "region_constraints",
    "sampling_oracle",
    "serialize_instance",
    "simplex_solve",
    "solve",
    "sqrt_d_approx",
    "subtract_and_triangulate",
]

__version__ = "0.1.0"
