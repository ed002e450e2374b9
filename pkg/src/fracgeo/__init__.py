"""Numerical toolkit for anisotropic fractional perimeters of convex bodies.

Computes the anisotropic fractional s-perimeter P_s(K, L) of polytopes in
dimensions 2 and 3 by three independent routes, the associated fractional
area measure and its structural identities, the s -> 0 and s -> 1 endpoint
limits, and solves the corresponding Minkowski problem and isoperimetric
search by scale-invariant gradient descent.
"""
from .bodies import (
    GaugeBody,
    PerturbationField,
    PolytopeBody,
    SmoothBody,
    anisotropic_perimeter,
    body_from_dict,
    body_from_json,
    gauge_from_dict,
    gauge_from_json,
    gauge_norm,
    gauge_rho,
    moment_body,
    moment_body_support,
    radial,
    support,
    volume,
    wulff_shape,
    xray,
)
from .errors import (
    DegenerateBodyError,
    EmptyBodyError,
    FracGeoError,
    InvalidSError,
    InvalidTargetError,
    NotTangentError,
    PointNotOnBoundaryError,
    PointOutsideError,
    StalledError,
    UnboundedError,
    WulffDegenerateError,
)
from .fracperim import (
    PerimeterEstimate,
    ludwig_limits,
    ps_linesample,
    ps_montecarlo,
    ps_xray,
)
from .limits import (
    lemma_conv_check,
    lemma_xzlem_check,
    limit_s0_check,
    mixed_area_density_check,
    normal_curvature,
)
from .measures import (
    AtomicSphericalMeasure,
    DualMixedVolumeValue,
    area_measure,
    centroid,
    dual_mixed_volume,
    identity_asint_check,
    lemma_id_check,
    variational_check,
)
from .minkowski import (
    IsoperimetricReport,
    MinkowskiProblem,
    SolveReport,
    isoperimetric_search,
    measure_from_dict,
    measure_from_json,
    project_centroid,
    solve_minkowski,
    validate_target,
)
from .quadrature import (
    BoundaryQuadrature,
    QuadratureRule,
    RandomSource,
    boundary_rule,
    sample_interior,
    sample_sphere,
    sphere_rule,
)

__version__ = "0.1.0"
