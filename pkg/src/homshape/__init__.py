"""Elastic shape analysis for curves on homogeneous manifolds.

Curves on the 2-sphere, on Stiefel and Grassmann frame manifolds, and on
rotation groups are compared through a velocity transform into the matrix
algebra, where distances are flat L^2 integrals, optimal reparametrisation
is a dynamic program, and geodesics are straight lines.
"""

from .curves import (
    DiscreteCurve,
    FrameLift,
    ReparamMap,
    evaluate,
    fit_velocities,
    identity_warp,
    lift_frames,
    reparametrise_curve,
    uniform_resample,
)
from .errors import (
    BaseMismatchError,
    ConfigurationError,
    DegenerateIntermediateError,
    DegenerateSegmentError,
    DegenerateVelocityError,
    HomshapeError,
    InputError,
    InvalidArcError,
    InvalidTangentError,
    InvalidWarpError,
    InvariantFailure,
    LiftFailureError,
    NumericalDegeneracyError,
)
from .estimators import ElasticShapeDistance, SquareRootVelocity
from .lie import (
    ReductiveSplit,
    adjoint,
    algebra_inner,
    algebra_norm,
    expm,
    hat,
    qr_complete,
    reductive_project,
    rodrigues,
    vee,
)
from .manifolds import (
    ManifoldPoint,
    ManifoldSpec,
    TangentVector,
    act,
    act_tangent,
    alpha,
    alpha_equivariance_defect,
    manifold_exp,
)
from .metrics import (
    ShapeDistanceReport,
    geodesic_interpolate,
    l2_distance,
    pullback_metric,
    shape_distance,
)
from .registration import (
    DPTable,
    brute_force_reparam,
    dp_table,
    local_cost,
    reparametrise,
)
from .transforms import (
    AlgebraPath,
    psi,
    psi_g0,
    reductive_srvt,
    reductive_srvt_inverse,
    rho_evolution,
    scale,
    srvt,
    srvt_inverse,
    unscale,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraPath",
    "BaseMismatchError",
    "ConfigurationError",
    "DPTable",
    "DegenerateIntermediateError",
    "DegenerateSegmentError",
    "DegenerateVelocityError",
    "DiscreteCurve",
    "ElasticShapeDistance",
    "FrameLift",
    "HomshapeError",
    "InputError",
    "InvalidArcError",
    "InvalidTangentError",
    "InvalidWarpError",
    "InvariantFailure",
    "LiftFailureError",
    "ManifoldPoint",
    "ManifoldSpec",
    "NumericalDegeneracyError",
    "ReductiveSplit",
    "ReparamMap",
    "ShapeDistanceReport",
    "SquareRootVelocity",
    "TangentVector",
    "act",
    "act_tangent",
    "adjoint",
    "algebra_inner",
    "algebra_norm",
    "alpha",
    "alpha_equivariance_defect",
    "brute_force_reparam",
    "dp_table",
    "evaluate",
    "expm",
    "fit_velocities",
    "geodesic_interpolate",
    "hat",
    "identity_warp",
    "l2_distance",
    "lift_frames",
    "local_cost",
    "manifold_exp",
    "psi",
    "psi_g0",
    "pullback_metric",
    "qr_complete",
    "reductive_project",
    "reductive_srvt",
    "reductive_srvt_inverse",
    "reparametrise",
    "reparametrise_curve",
    "rho_evolution",
    "rodrigues",
    "scale",
    "shape_distance",
    "srvt",
    "srvt_inverse",
    "uniform_resample",
    "unscale",
    "vee",
]
