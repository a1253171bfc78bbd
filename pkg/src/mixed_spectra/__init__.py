"""Lowest eigenvalues of the Laplacian on convex polygons under per-side
Dirichlet/Neumann boundary conditions, and numerical certification of the
eigenvalue-ordering inequalities between complementary boundary
configurations."""

from ._kernels import backend_name
from .eigensolve import (
    ConvergenceStudy,
    EigenResult,
    RichardsonResult,
    eigen_convergence_study,
    richardson_extrapolate,
    smallest_eigenpair,
    smallest_eigenpairs,
)
from .errors import (
    AllNeumannError,
    ConfigError,
    DegenerateEdgeError,
    InconsistentMeshError,
    InvalidAnglesError,
    MixedSpectraError,
    NonConvexError,
    NotConvergedError,
    OrderMismatchError,
    SingularStiffnessError,
    ViolationError,
    ZeroFunctionError,
)
from .fem import (
    DiscreteFunction,
    FemSystem,
    assemble,
    derivative_test_function,
    grisvard_residual,
    interpolate,
    p1_to_p2,
    rayleigh_quotient,
)
from .geometry import (
    AngleCondition,
    LabeledPolygon,
    TriangleSpec,
    align_neumann_side,
    angle_condition_holds,
    junction_angles,
    make_polygon,
    make_triangle,
    polygon_from_json,
)
from .mesh import Mesh, base_mesh, mesh_at_level, mesh_size, refine_uniform
from .verify import (
    SweepResult,
    TrendReport,
    VerificationReport,
    sweep_split_polygons,
    sweep_triangles,
    verify_grisvard,
    verify_right_triangle,
    verify_split,
    verify_triangle_corollary,
    verify_voila_identity,
)

__version__ = "0.1.0"
