"""P1/P2 Lagrange assembly with Dirichlet elimination, plus the evaluation
operations used by the theorem checks: Rayleigh quotients, the projected
derivative test function, and the second-derivative integral residual.

Degrees of freedom are mesh nodes (P1) or mesh nodes followed by edge
midpoints in lexicographic edge order (P2).  A dof is constrained when it
lies on the closure of the Dirichlet boundary part, so a node at a
Dirichlet-Neumann junction belongs to the Dirichlet side.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse
from scipy.sparse.linalg import factorized

from . import _kernels
from .errors import (
    InconsistentMeshError,
    OrderMismatchError,
    ZeroFunctionError,
)
from .geometry import DIRICHLET, LabeledPolygon
from .mesh import Mesh, unique_edges


def dof_connectivity(m: Mesh, order: int) -> tuple[np.ndarray, int]:
    """Element-to-dof map (ne, 3 or 6) and the total dof count."""
    if order == 1:
        return m.elements, m.n_nodes
    if order == 2:
        edges, elem_edges = unique_edges(m.elements)
        conn = np.hstack([m.elements, m.n_nodes + elem_edges])
        return conn, m.n_nodes + len(edges)
    raise ValueError(f"order must be 1 or 2, got {order}")


def dof_points(m: Mesh, order: int) -> np.ndarray:
    """Coordinates of every dof (nodes, then P2 edge midpoints)."""
    if order == 1:
        return m.nodes
    edges, _ = unique_edges(m.elements)
    mids = 0.5 * (m.nodes[edges[:, 0]] + m.nodes[edges[:, 1]])
    return np.vstack([m.nodes, mids])


def constrained_dof_mask(m: Mesh, p: LabeledPolygon, order: int) -> np.ndarray:
    """True for dofs on the closure of the Dirichlet part of the boundary."""
    conn_total = dof_connectivity(m, order)[1]
    mask = np.zeros(conn_total, dtype=bool)
    on_dirichlet = np.array([p.side_labels[s] == DIRICHLET for s in m.boundary_sides])
    dir_edges = m.boundary_edges[on_dirichlet]
    mask[dir_edges.ravel()] = True
    if order == 2:
        edges, _ = unique_edges(m.elements)
        pairs = np.sort(dir_edges, axis=1)
        # locate each Dirichlet boundary edge in the lexicographic edge list
        idx = np.searchsorted(
            edges[:, 0] * (edges.max() + 2) + edges[:, 1],
            pairs[:, 0] * (edges.max() + 2) + pairs[:, 1],
        )
        mask[m.n_nodes + idx] = True
    return mask


@dataclass
class FemSystem:
    """Assembled stiffness/mass pair for one labeling of one mesh.

    ``stiffness``/``mass`` live on the free dofs; the ``*_full`` matrices keep
    every dof and carry no boundary conditions (pure Neumann operator).
    """

    mesh: Mesh
    polygon: LabeledPolygon
    order: int
    stiffness: sparse.csr_matrix
    mass: sparse.csr_matrix
    stiffness_full: sparse.csr_matrix
    mass_full: sparse.csr_matrix
    free_dofs: np.ndarray
    dof_map: np.ndarray  # total dof -> free index, -1 if constrained
    n_dofs: int

    @property
    def n_free(self) -> int:
        return len(self.free_dofs)

    def expand(self, free_values: np.ndarray) -> np.ndarray:
        """Scatter a free-dof vector to all dofs (constraints = 0)."""
        full = np.zeros(self.n_dofs)
        full[self.free_dofs] = free_values
        return full


def assemble(m: Mesh, p: LabeledPolygon, order: int = 2, backend=None) -> FemSystem:
    """Assemble (K, M) with exact quadrature and eliminate Dirichlet dofs.

    Raises :class:`InconsistentMeshError` when the mesh was not built from
    ``p``'s geometry (labels may differ: relabeling a mesh's polygon is the
    normal way to compare boundary conditions on identical meshes).
    """
    if m.polygon is not p:
        if m.polygon.vertices.shape != p.vertices.shape or not np.array_equal(
            m.polygon.vertices, p.vertices
        ):
            raise InconsistentMeshError("mesh geometry does not match the polygon")
    kern = _kernels.get_backend() if backend is None else _kernels.get_backend(backend)
    coords = np.ascontiguousarray(m.element_coords())
    if order == 1:
        ke, me = kern.p1_element_matrices(coords)
    elif order == 2:
        ke, me = kern.p2_element_matrices(coords)
    else:
        raise ValueError(f"order must be 1 or 2, got {order}")

    conn, n_dofs = dof_connectivity(m, order)
    nl = conn.shape[1]
    rows = np.repeat(conn, nl, axis=1).ravel()
    cols = np.tile(conn, (1, nl)).ravel()
    k_full = sparse.coo_matrix((ke.ravel(), (rows, cols)), shape=(n_dofs, n_dofs)).tocsr()
    m_full = sparse.coo_matrix((me.ravel(), (rows, cols)), shape=(n_dofs, n_dofs)).tocsr()

    constrained = constrained_dof_mask(m, p, order)
    free = np.flatnonzero(~constrained)
    dof_map = np.full(n_dofs, -1, dtype=np.int64)
    dof_map[free] = np.arange(len(free))
    k_free = k_full[free][:, free].tocsr()
    m_free = m_full[free][:, free].tocsr()
    return FemSystem(
        mesh=m,
        polygon=p,
        order=order,
        stiffness=k_free,
        mass=m_free,
        stiffness_full=k_full,
        mass_full=m_full,
        free_dofs=free,
        dof_map=dof_map,
        n_dofs=n_dofs,
    )


@dataclass
class DiscreteFunction:
    """Finite element function: coefficient per dof on a mesh."""

    mesh: Mesh
    order: int
    values: np.ndarray

    def copy(self) -> "DiscreteFunction":
        return DiscreteFunction(self.mesh, self.order, self.values.copy())


def interpolate(fn, m: Mesh, order: int = 2) -> DiscreteFunction:
    """Nodal interpolant of ``fn(x, y)`` (vectorized callable)."""
    pts = dof_points(m, order)
    return DiscreteFunction(m, order, np.asarray(fn(pts[:, 0], pts[:, 1]), dtype=float))


def rayleigh_quotient(sys: FemSystem, f: DiscreteFunction) -> float:
    """(f' K f) / (f' M f) over the free dofs of ``sys``.

    ``f`` is first projected onto the constrained space (entries on the
    closure of the Dirichlet part zeroed).  Raises
    :class:`ZeroFunctionError` when the projected M-norm is below 1e-14 of
    the coefficient scale.
    """
    if f.mesh is not sys.mesh or f.order != sys.order:
        raise InconsistentMeshError("function does not live on the system's space")
    vals = f.values.copy()
    mask = np.ones(sys.n_dofs, dtype=bool)
    mask[sys.free_dofs] = False
    vals[mask] = 0.0
    num = vals @ (sys.stiffness_full @ vals)
    den = vals @ (sys.mass_full @ vals)
    scale = float(np.max(np.abs(vals), initial=0.0))
    if den <= 0.0 or np.sqrt(den) < 1e-14 * scale or scale == 0.0:
        raise ZeroFunctionError("function vanishes after constraint projection")
    return float(num / den)


def h1_seminorm_sq(f: DiscreteFunction, backend=None) -> float:
    """Integral of |grad f|^2 (P2 only)."""
    if f.order != 2:
        raise OrderMismatchError("H1 seminorm kernel expects a P2 function")
    kern = _kernels.get_backend() if backend is None else _kernels.get_backend(backend)
    coords = np.ascontiguousarray(f.mesh.element_coords())
    conn, _ = dof_connectivity(f.mesh, 2)
    vals = np.ascontiguousarray(f.values[conn])
    return float(np.sum(kern.p2_h1_seminorm_elements(coords, vals)))


def derivative_test_function(
    u: DiscreteFunction,
    direction,
    target_sides: tuple[int, ...] | None = None,
    backend=None,
) -> DiscreteFunction:
    """L2-projection of the directional derivative of a P2 function onto
    continuous P1, zeroed on the closure of the target Dirichlet set.

    By default the target is the Neumann part of the function's polygon: with
    ``direction`` the inward normal of a vertical Neumann side, the result is
    an admissible trial function for the complementary eigenvalue problem on
    the same mesh.
    """
    if u.order != 2:
        raise OrderMismatchError("derivative test function needs a P2 input")
    d = np.asarray(direction, dtype=float)
    nd = np.linalg.norm(d)
    if nd == 0.0:
        raise ZeroFunctionError("direction must be nonzero")
    d = d / nd

    m = u.mesh
    kern = _kernels.get_backend() if backend is None else _kernels.get_backend(backend)
    coords = np.ascontiguousarray(m.element_coords())
    conn, _ = dof_connectivity(m, 2)
    local = np.ascontiguousarray(u.values[conn])
    loads = kern.p2_directional_p1_load(coords, local, d)

    b = np.zeros(m.n_nodes)
    np.add.at(b, m.elements.ravel(), loads.ravel())
    _, me = kern.p1_element_matrices(coords)
    rows = np.repeat(m.elements, 3, axis=1).ravel()
    cols = np.tile(m.elements, (1, 3)).ravel()
    mass1 = sparse.coo_matrix((me.ravel(), (rows, cols)),
                              shape=(m.n_nodes, m.n_nodes)).tocsc()
    v = factorized(mass1)(b)

    if target_sides is None:
        target_sides = m.polygon.neumann_sides()
    target = set(int(s) for s in target_sides)
    on_target = np.isin(m.boundary_sides, list(target))
    v[m.boundary_edges[on_target].ravel()] = 0.0
    return DiscreteFunction(m, 1, v)


def p1_to_p2(f: DiscreteFunction) -> DiscreteFunction:
    """Exact embedding of a P1 function into the P2 space on the same mesh."""
    if f.order != 1:
        raise OrderMismatchError("embedding expects a P1 function")
    edges, _ = unique_edges(f.mesh.elements)
    mid = 0.5 * (f.values[edges[:, 0]] + f.values[edges[:, 1]])
    return DiscreteFunction(f.mesh, 2, np.concatenate([f.values, mid]))


def grisvard_residual(u: DiscreteFunction, backend=None) -> float:
    """Normalized defect of the second-derivative integral identity.

    For a P2 function the elementwise Hessian is constant, so
    ``int (dxy u)^2`` and ``int (dxx u)(dyy u)`` are exact sums; the residual
    is their absolute difference over the H1 seminorm squared.  It tends to 0
    under refinement for discrete eigenfunctions of mixed problems whose
    junction angles are acute, and stays O(1) for functions violating the
    boundary hypotheses.
    """
    if u.order != 2:
        raise OrderMismatchError("residual needs a P2 function")
    kern = _kernels.get_backend() if backend is None else _kernels.get_backend(backend)
    m = u.mesh
    coords = np.ascontiguousarray(m.element_coords())
    conn, _ = dof_connectivity(m, 2)
    local = np.ascontiguousarray(u.values[conn])
    hess = kern.p2_element_hessians(coords, local)
    d1 = coords[:, 1] - coords[:, 0]
    d2 = coords[:, 2] - coords[:, 0]
    areas = 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    i_mixed = float(np.sum(areas * hess[:, 1] ** 2))
    i_prod = float(np.sum(areas * hess[:, 0] * hess[:, 2]))
    h1 = float(np.sum(kern.p2_h1_seminorm_elements(coords, local)))
    return abs(i_mixed - i_prod) / (h1 + 1e-300)
