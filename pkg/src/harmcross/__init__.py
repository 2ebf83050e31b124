"""Planar potential-theory toolkit: harmonic measures, boundary-cross
envelopes, and constructive domain sequences."""

__version__ = "0.1.0"

from .geometry import (
    BoundaryArc,
    BoundarySet,
    Curve,
    NearestBoundary,
    PlanarDomain,
    PointType,
    arc_length,
    both_faces,
    boundary_set_from_json,
    boundary_set_to_json,
    classify_point,
    domain_from_json,
    domain_to_json,
    find_extendible_points,
    nearest_boundary,
)
from .measure import (
    CrossValidationReport,
    GridConfig,
    MeasureField,
    WosConfig,
    cross_validate,
    disc_arc_measure,
    grid_measure,
    halfplane_interval_measure,
    measure_values,
    wos_measure,
)
from .envelope import (
    ConvergenceReport,
    CrossSpec,
    EnvelopeSlice,
    MembershipResult,
    check_monotone_convergence,
    enlarge_boundary_set,
    envelope_membership,
    envelope_slice,
    interior_grid,
)
from .construct import (
    CompanionCurve,
    DomainExtension,
    GluingReport,
    SeparatorWitness,
    build_companion,
    build_enlarged_domain,
    find_separator,
    verify_gluing,
)
from .levelset import (
    LevelSetDomain,
    SublevelSequenceReport,
    ball_fixture,
    build_sublevel_sequence,
    complex_hessian_min_eig,
    disc_fixture,
)
from . import errors, fixtures

__all__ = [name for name in dir() if not name.startswith("_")]
