"""Exact engine for torus-equivariant bivector fields on smooth toric varieties.

Builds fans from ray data, enumerates torus orbits, transports equivariant
bivector fields across affine charts, computes their exact rank on every
orbit, assembles degeneracy-locus stratifications, tests the Poisson
criterion, and certifies the lower bounds on degeneracy-locus components.
All arithmetic is exact (arbitrary-precision integers and rationals).
"""

from .exact_linalg import (
    IntMatrix,
    NotSquareError,
    NotUnimodularError,
    RatMatrix,
    rational_kernel,
    rational_rank,
    smith_normal_form,
    unimodular_inverse,
)
from .toric_fans import (
    BadParamsError,
    Cone,
    Fan,
    HRep,
    InvalidFanError,
    NotFullDimensionalError,
    NotSmoothError,
    UnknownNameError,
    ValidationReport,
    builtin_fan,
    cone_contains,
    cone_faces,
    dual_frame,
    extend_to_basis,
    halfspace_ray,
    intersect_cones,
    is_complete,
    is_smooth_cone,
    validate_fan,
)
from .orbits import (
    ChartOrbit,
    NoContainingMaxConeError,
    OrbitRef,
    closure_cones,
    enumerate_cones,
    orbit_in_chart,
    sample_orbit_point,
)
from .bivector import (
    ChartPresentation,
    DiagonalEntryError,
    EquivariantBivector,
    NoBaseChartError,
    NotRegularError,
    UndefinedEntryError,
    entry_exponents,
    evaluate_matrix,
    is_regular_global,
    is_regular_on_chart,
    poisson_check,
    poisson_witness,
    transition,
)
from .degeneracy import (
    ConeNotInFanError,
    OracleDisagreementError,
    OrbitRank,
    Stratification,
    TheoremCertificate,
    ZeroBivectorError,
    certify_main_theorem,
    components,
    numeric_rank_oracle,
    rank_on_orbit,
    stratify,
)

__version__ = "0.1.0"
