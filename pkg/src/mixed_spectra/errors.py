"""Exception hierarchy for mixed_spectra."""


class MixedSpectraError(Exception):
    """Base class for all package errors."""


class NonConvexError(MixedSpectraError):
    """Polygon is not strictly convex (cross-product sign violation)."""


class DegenerateEdgeError(MixedSpectraError):
    """An edge is shorter than 1e-12 of the polygon diameter."""


class AllNeumannError(MixedSpectraError):
    """No side carries a Dirichlet label; the lowest eigenvalue would be 0."""


class InvalidAnglesError(MixedSpectraError):
    """Triangle angles are nonpositive or sum to >= pi."""


class InconsistentMeshError(MixedSpectraError):
    """Mesh was not derived from the polygon it is being used with."""


class OrderMismatchError(MixedSpectraError):
    """Operation requires a P2 function but received a different order."""


class ZeroFunctionError(MixedSpectraError):
    """Function is (numerically) zero after constraint projection."""


class NotConvergedError(MixedSpectraError):
    """Eigensolver residual stayed above tolerance after max_iter steps."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SingularStiffnessError(MixedSpectraError):
    """Stiffness factorization failed; indicates a constraint bug."""


class ViolationError(MixedSpectraError):
    """A sweep produced a Violation verdict; carries the full dump."""

    def __init__(self, message, dump=None):
        super().__init__(message)
        self.dump = dump


class ConfigError(MixedSpectraError):
    """CLI / run configuration is invalid."""
