"""Exact exterior algebra and numerical ball charts for nonnegative
Grassmann chambers.

The exact layer (exterior products, Plucker coordinates, shrink/extend
witnesses, chamber splitting) runs entirely over rationals; the topological
layer (convexoid half-ball maps, glued ball charts) evaluates in floating
point with explicit tolerances.
"""

from .exterior import (
    GradeError,
    MultiVector,
    NormalizationError,
    SignClass,
    classify_sign,
    complement,
    contract,
    inner,
    normalize,
    q_form,
    wedge,
)
from .plucker import (
    DecomposabilityError,
    PlaneMatrix,
    RankError,
    canonical_scale,
    contains,
    is_decomposable,
    plucker_of_matrix,
    q_orthocomplement,
    spanning_vectors,
)
from .lemmas import (
    EpsilonExhausted,
    EpsilonSearch,
    extend_nonneg,
    extend_positive,
    shrink_nonneg,
    shrink_positive,
)
from .chamber import (
    ChamberPoint,
    ChartPoint,
    ContainmentError,
    SplitTriple,
    ValidationError,
    assemble,
    ball_chart,
    ball_chart_inverse,
    e_fiber_polytope,
    f_fiber_polytope,
    get_chart,
    split,
)
from .convexoid import (
    ConvexoidSpec,
    DegenerateError,
    DomainError,
    GluingError,
    HPolytope,
    StarConvexityViolation,
    UnboundedError,
    barycenter,
    center_fibers,
    exit_time,
    from_half_ball,
    glue,
    join_fiber,
    radial_project_base,
    to_half_ball,
    vertices,
)

__version__ = "0.1.0"
