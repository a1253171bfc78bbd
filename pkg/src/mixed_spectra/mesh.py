"""Conforming triangulations of labeled polygons with uniform red refinement.

The base mesh of a triangle is the triangle itself; an n-gon gets a centroid
fan.  Red refinement splits each element into four congruent children through
edge midpoints, so the mesh size halves exactly per level and element shape
quality is preserved.  Boundary edges keep a tag identifying the polygon side
they discretize, which is how Dirichlet constraints are located later.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .geometry import LabeledPolygon


@dataclass(frozen=True)
class Mesh:
    """Triangulation of a labeled polygon.

    ``elements`` are vertex-index triples in counter-clockwise order.
    ``boundary_edges[k]`` is a node pair lying on polygon side
    ``boundary_sides[k]``, oriented along the boundary.  ``level`` counts
    uniform refinements from the base mesh.
    """

    polygon: LabeledPolygon
    nodes: np.ndarray          # (nn, 2) float
    elements: np.ndarray       # (ne, 3) int
    boundary_edges: np.ndarray  # (nb, 2) int
    boundary_sides: np.ndarray  # (nb,) int
    level: int

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_elements(self) -> int:
        return len(self.elements)

    def element_coords(self) -> np.ndarray:
        return self.nodes[self.elements]

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "nodes": [[float(x), float(y)] for x, y in self.nodes],
            "elements": self.elements.tolist(),
            "boundary_edges": [
                [int(a), int(b), int(s)]
                for (a, b), s in zip(self.boundary_edges, self.boundary_sides)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _freeze(m: Mesh) -> Mesh:
    for arr in (m.nodes, m.elements, m.boundary_edges, m.boundary_sides):
        arr.setflags(write=False)
    return m


def base_mesh(p: LabeledPolygon) -> Mesh:
    """Single element for a triangle, centroid fan for larger n-gons."""
    n = p.n_sides
    if n == 3:
        nodes = np.array(p.vertices, dtype=float)
        elements = np.array([[0, 1, 2]], dtype=np.int64)
        bedges = np.array([[i, (i + 1) % 3] for i in range(3)], dtype=np.int64)
        bsides = np.arange(3, dtype=np.int64)
    else:
        centroid = np.mean(p.vertices, axis=0)
        nodes = np.vstack([p.vertices, centroid[None, :]])
        elements = np.array([[i, (i + 1) % n, n] for i in range(n)], dtype=np.int64)
        bedges = np.array([[i, (i + 1) % n] for i in range(n)], dtype=np.int64)
        bsides = np.arange(n, dtype=np.int64)
    return _freeze(Mesh(p, nodes, elements, bedges, bsides, level=0))


def refine_uniform(m: Mesh) -> Mesh:
    """Red refinement: each element splits into 4 via edge midpoints.

    Midpoint node ids are assigned in first-use order while scanning elements,
    which makes the refined mesh deterministic.
    """
    nodes = m.nodes
    midpoint_id: dict[tuple[int, int], int] = {}
    new_coords = [nodes]
    next_id = len(nodes)

    def mid(a: int, b: int) -> int:
        nonlocal next_id
        key = (a, b) if a < b else (b, a)
        idx = midpoint_id.get(key)
        if idx is None:
            idx = next_id
            midpoint_id[key] = idx
            new_coords.append((nodes[a] + nodes[b])[None, :] / 2.0)
            next_id += 1
        return idx

    children = np.empty((4 * m.n_elements, 3), dtype=np.int64)
    for k, (v0, v1, v2) in enumerate(m.elements):
        m01, m12, m20 = mid(v0, v1), mid(v1, v2), mid(v2, v0)
        children[4 * k + 0] = (v0, m01, m20)
        children[4 * k + 1] = (v1, m12, m01)
        children[4 * k + 2] = (v2, m20, m12)
        children[4 * k + 3] = (m01, m12, m20)

    nb = len(m.boundary_edges)
    bedges = np.empty((2 * nb, 2), dtype=np.int64)
    bsides = np.empty(2 * nb, dtype=np.int64)
    for k, ((a, b), s) in enumerate(zip(m.boundary_edges, m.boundary_sides)):
        c = mid(int(a), int(b))
        bedges[2 * k] = (a, c)
        bedges[2 * k + 1] = (c, b)
        bsides[2 * k] = bsides[2 * k + 1] = s

    return _freeze(Mesh(
        polygon=m.polygon,
        nodes=np.vstack(new_coords),
        elements=children,
        boundary_edges=bedges,
        boundary_sides=bsides,
        level=m.level + 1,
    ))


def mesh_at_level(p: LabeledPolygon, level: int) -> Mesh:
    m = base_mesh(p)
    for _ in range(level):
        m = refine_uniform(m)
    return m


def mesh_size(m: Mesh) -> float:
    """Maximum element circumdiameter; halves exactly under refinement."""
    coords = m.element_coords()
    a = np.linalg.norm(coords[:, 1] - coords[:, 0], axis=1)
    b = np.linalg.norm(coords[:, 2] - coords[:, 1], axis=1)
    c = np.linalg.norm(coords[:, 0] - coords[:, 2], axis=1)
    areas = element_areas(m)
    return float(np.max(a * b * c / (2.0 * areas)))


def element_areas(m: Mesh) -> np.ndarray:
    coords = m.element_coords()
    d1 = coords[:, 1] - coords[:, 0]
    d2 = coords[:, 2] - coords[:, 0]
    return 0.5 * (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])


def min_interior_angle(m: Mesh) -> float:
    """Smallest element angle; invariant under red refinement."""
    coords = m.element_coords()
    worst = np.inf
    for i in range(3):
        u = coords[:, (i + 1) % 3] - coords[:, i]
        v = coords[:, (i + 2) % 3] - coords[:, i]
        cosang = np.einsum("ij,ij->i", u, v) / (
            np.linalg.norm(u, axis=1) * np.linalg.norm(v, axis=1))
        worst = min(worst, float(np.min(np.arccos(np.clip(cosang, -1.0, 1.0)))))
    return worst


def unique_edges(elements: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All element edges as sorted node pairs, deduplicated and ordered
    lexicographically, plus the (ne, 3) map from element-local edges
    (0-1, 1-2, 2-0) to edge ids.  The lexicographic order keeps P2 dof
    numbering deterministic.
    """
    ne = len(elements)
    e = np.concatenate([elements[:, [0, 1]], elements[:, [1, 2]], elements[:, [2, 0]]])
    e.sort(axis=1)
    uniq, inv = np.unique(e, axis=0, return_inverse=True)
    inv = inv.reshape(3, ne)
    return uniq, np.stack([inv[0], inv[1], inv[2]], axis=1)
