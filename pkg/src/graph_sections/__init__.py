"""Exact finite sections of finite-hopping-range operators on locally finite
graphs: injectivity certificates and exact section preimages."""

__version__ = "0.1.0"

from .errors import (
    DirectedGraph,
    EnumerationTooShort,
    FloatModeUnsupported,
    GraphSectionsError,
    InvalidKey,
    NegativeLambda,
    NoOffDiagonal,
    NotSimplicial,
    PremiseFailed,
    SingularSection,
    SupportOutsideBall,
    WindowExhausted,
    ZeroDegree,
)
from .graphs import (
    DirectedRay,
    DisjointUnion,
    Enumeration,
    ExplicitFinite,
    FunctionGraph,
    Graph,
    RegularTree,
    ZLine,
    ZSquare,
    ball,
    degree,
    enumerate_vertices,
    neighbors,
    window_connected,
)
from .maxprinciple import (
    MaxPrincipleCertificate,
    Status,
    check_structural,
    falsify,
    propagation_certificate,
)
from .operators import (
    Operator,
    StencilRow,
    VertexFunction,
    adjacency,
    apply,
    custom_operator,
    laplacian,
    laplacian_plus_lambda,
    row_support_indices,
)
from .scalars import GAUSSIAN, RATIONAL, FloatField, GaussianRational
from .sections import (
    build_rows_matrix,
    build_section,
    determinant,
    is_injective,
    kernel_basis,
    rank,
    rows_independent,
    seminorm,
)
from .solver import solve_progressive, solve_section, verify
