"""Convex polygons with per-side Dirichlet/Neumann labels.

The polygon boundary splits into the Dirichlet part (union of sides labeled
``"D"``) and its Neumann complement (sides labeled ``"N"``).  Everything the
verification layer needs from plane geometry lives here: junction angles
between the two boundary parts, the strict acute-angle predicate, side-role
assignment for triangles, and rigid rotations that align a chosen side with
the vertical axis.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AllNeumannError,
    DegenerateEdgeError,
    InvalidAnglesError,
    NonConvexError,
)

DIRICHLET = "D"
NEUMANN = "N"

#: Strictness margin for the junction-angle predicate (radians).
DEFAULT_EPS_ANGLE = 1e-9

_DEGENERATE_REL = 1e-12


def _as_points(vertices) -> np.ndarray:
    pts = np.asarray(vertices, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise NonConvexError(f"need an (n>=3, 2) vertex array, got shape {pts.shape}")
    return pts


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


@dataclass(frozen=True)
class LabeledPolygon:
    """Strictly convex polygon, counter-clockwise, with one label per side.

    Side ``i`` joins ``vertices[i]`` to ``vertices[(i+1) % n]``.  Instances
    are immutable; construct through :func:`make_polygon` or
    :func:`make_triangle`, which validate the invariants.
    """

    vertices: np.ndarray
    side_labels: tuple[str, ...]

    @property
    def n_sides(self) -> int:
        return len(self.side_labels)

    def side_vectors(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    def side_lengths(self) -> np.ndarray:
        return np.linalg.norm(self.side_vectors(), axis=1)

    def interior_angles(self) -> np.ndarray:
        """Interior angle at every vertex, in (0, pi)."""
        e = self.side_vectors()
        e_in = np.roll(e, 1, axis=0)   # side arriving at vertex i
        e_out = e                      # side leaving vertex i
        turn = np.arctan2(_cross(e_in, e_out), np.einsum("ij,ij->i", e_in, e_out))
        return math.pi - turn

    def dirichlet_sides(self) -> tuple[int, ...]:
        return tuple(i for i, lab in enumerate(self.side_labels) if lab == DIRICHLET)

    def neumann_sides(self) -> tuple[int, ...]:
        return tuple(i for i, lab in enumerate(self.side_labels) if lab == NEUMANN)

    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.max(np.linalg.norm(d, axis=2)))

    def area(self) -> float:
        v = self.vertices
        return 0.5 * float(np.sum(_cross(v, np.roll(v, -1, axis=0))))

    def with_labels(self, labels: Sequence[str]) -> "LabeledPolygon":
        """Same geometry, different labels (revalidated)."""
        return make_polygon(self.vertices, labels)

    def inward_normal(self, side: int) -> np.ndarray:
        """Unit normal of a side pointing into the polygon."""
        t = self.side_vectors()[side]
        t = t / np.linalg.norm(t)
        return np.array([-t[1], t[0]])  # left of travel = interior for CCW

    def to_json_dict(self) -> dict:
        return {
            "vertices": [[float(x), float(y)] for x, y in self.vertices],
            "labels": list(self.side_labels),
        }


def make_polygon(vertices, labels: Sequence[str]) -> LabeledPolygon:
    """Validate and build a :class:`LabeledPolygon`.

    Clockwise input is reordered to counter-clockwise (labels follow their
    sides).  Raises :class:`NonConvexError`, :class:`DegenerateEdgeError` or
    :class:`AllNeumannError` on invalid input.
    """
    pts = _as_points(vertices)
    labels = [str(l).upper() for l in labels]
    n = len(pts)
    if len(labels) != n:
        raise NonConvexError(f"{n} vertices but {len(labels)} labels")
    for lab in labels:
        if lab not in (DIRICHLET, NEUMANN):
            raise NonConvexError(f"labels must be 'D' or 'N', got {lab!r}")

    area2 = float(np.sum(_cross(pts, np.roll(pts, -1, axis=0))))
    if area2 < 0.0:
        # reverse orientation; side k of the reversed list is old side n-1-k
        pts = np.vstack([pts[:1], pts[1:][::-1]])
        labels = [labels[n - 1 - k] for k in range(n)]

    edges = np.roll(pts, -1, axis=0) - pts
    lengths = np.linalg.norm(edges, axis=1)
    diam = float(np.max(np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)))
    if np.any(lengths < _DEGENERATE_REL * diam):
        raise DegenerateEdgeError("edge shorter than 1e-12 of the diameter")
    cross = _cross(edges, np.roll(edges, -1, axis=0))
    if np.any(cross <= 0.0):
        raise NonConvexError("polygon is not strictly convex")
    if DIRICHLET not in labels:
        raise AllNeumannError("at least one side must be Dirichlet")

    pts = pts.copy()
    pts.setflags(write=False)
    return LabeledPolygon(vertices=pts, side_labels=tuple(labels))


_ROLES = ("S", "M", "L")


@dataclass(frozen=True)
class TriangleSpec:
    """Triangle construction data plus the derived S/M/L side roles.

    Either ``vertices`` (three points, kept as given) or ``angles``
    ``(alpha, beta)`` (the triangle is then normalized so its longest side
    runs from (0,0) to (1,0) with length 1).  ``dirichlet`` names the roles
    that carry the Dirichlet label; remaining sides are Neumann.
    """

    vertices: tuple | None = None
    angles: tuple[float, float] | None = None
    dirichlet: tuple[str, ...] = ("L",)
    side_roles: dict = field(init=False, repr=False)

    def __post_init__(self):
        if (self.vertices is None) == (self.angles is None):
            raise InvalidAnglesError("give exactly one of vertices/angles")
        want = tuple(str(r).upper() for r in (
            self.dirichlet if isinstance(self.dirichlet, (tuple, list)) else (self.dirichlet,)
        ))
        for r in want:
            if r not in _ROLES:
                raise InvalidAnglesError(f"dirichlet roles must be S/M/L, got {r!r}")
        object.__setattr__(self, "dirichlet", want)
        if self.angles is not None:
            a, b = float(self.angles[0]), float(self.angles[1])
            if a <= 0.0 or b <= 0.0 or a + b >= math.pi:
                raise InvalidAnglesError(f"invalid interior angles ({a}, {b})")
            object.__setattr__(self, "angles", (a, b))
            verts = _triangle_vertices_from_angles(a, b)
        else:
            verts = _as_points(self.vertices)
            if len(verts) != 3:
                raise InvalidAnglesError("triangle needs exactly 3 vertices")
        object.__setattr__(self, "side_roles", _assign_side_roles(verts))
        object.__setattr__(self, "vertices", tuple(map(tuple, verts)))

    def role_of_side(self, side: int) -> str:
        inv = {v: k for k, v in self.side_roles.items()}
        return inv[side]


def _triangle_vertices_from_angles(alpha: float, beta: float) -> np.ndarray:
    """Vertices with the longest side normalized to (0,0)-(1,0).

    The largest of the three interior angles goes to the apex, so the base is
    always a longest side; the two smaller angles sit at (0,0) and (1,0) in
    nondecreasing order.
    """
    a1, a2, _ = sorted((alpha, beta, math.pi - alpha - beta))
    # a2 < pi/2 always: a2 >= pi/2 would force the apex angle >= pi/2 too.
    x = math.tan(a2) / (math.tan(a1) + math.tan(a2))
    y = x * math.tan(a1)
    return np.array([[0.0, 0.0], [1.0, 0.0], [x, y]])


def _assign_side_roles(verts: np.ndarray) -> dict:
    """Map role S/M/L -> side index, sorted by length, ties by lowest index.

    Lengths equal to 12 relative digits count as tied, so isosceles triangles
    built from angles (where the computed lengths differ in the last ulp) get
    the deterministic index tie-break.
    """
    lengths = np.linalg.norm(np.roll(verts, -1, axis=0) - verts, axis=1)
    quantized = np.round(lengths / lengths.max(), 12)
    order = sorted(range(3), key=lambda i: (quantized[i], i))
    return {role: side for role, side in zip(_ROLES, order)}


def make_triangle(spec: TriangleSpec) -> LabeledPolygon:
    """Build the labeled triangle described by a :class:`TriangleSpec`."""
    labels = [NEUMANN] * 3
    for role in spec.dirichlet:
        labels[spec.side_roles[role]] = DIRICHLET
    return make_polygon(np.asarray(spec.vertices, dtype=float), labels)


def junction_angles(p: LabeledPolygon) -> list[tuple[int, float]]:
    """Interior angles at vertices where a Dirichlet side meets a Neumann one.

    Vertex ``i`` joins side ``i-1`` (incoming) and side ``i`` (outgoing);
    it is a junction when their labels differ.  Empty when all sides share
    one label.
    """
    angles = p.interior_angles()
    n = p.n_sides
    out = []
    for i in range(n):
        if p.side_labels[(i - 1) % n] != p.side_labels[i]:
            out.append((i, float(angles[i])))
    return out


@dataclass(frozen=True)
class AngleCondition:
    """Outcome of the ordering theorem's geometric hypothesis.

    Two sub-conditions are reported separately: the Neumann part must be a
    single side, and every junction angle must be strictly below pi/2 (with
    strictness margin ``eps_angle``).  Truthiness is the conjunction.
    """

    single_segment: bool
    angles_acute: bool
    junction_angles: tuple[tuple[int, float], ...]
    eps_angle: float

    def __bool__(self) -> bool:
        return self.single_segment and self.angles_acute

    @property
    def holds(self) -> bool:
        return bool(self)

    def reason(self) -> str | None:
        if self.holds:
            return None
        parts = []
        if not self.single_segment:
            parts.append("Neumann part is not a single side")
        if not self.angles_acute:
            worst = max((a for _, a in self.junction_angles), default=math.nan)
            parts.append(f"junction angle {worst:.6f} rad not < pi/2")
        return "; ".join(parts)


def angle_condition_holds(p: LabeledPolygon, eps_angle: float = DEFAULT_EPS_ANGLE) -> AngleCondition:
    """Check the hypothesis for the eigenvalue ordering on a labeled polygon."""
    juncts = tuple(junction_angles(p))
    acute = all(a < math.pi / 2 - eps_angle for _, a in juncts)
    single = len(p.neumann_sides()) == 1
    return AngleCondition(
        single_segment=single,
        angles_acute=acute,
        junction_angles=juncts,
        eps_angle=eps_angle,
    )


def align_neumann_side(p: LabeledPolygon, side: int) -> tuple[np.ndarray, LabeledPolygon]:
    """Rotate the polygon about the origin so ``side`` is parallel to the
    vertical axis.

    Returns ``(R, rotated)`` with ``R`` the 2x2 rotation applied to every
    vertex.  The rotation with the smaller angle is chosen, so an already
    vertical side yields the identity.  Eigenvalues are invariant under the
    map.
    """
    if not 0 <= side < p.n_sides:
        raise IndexError(f"side {side} out of range")
    t = p.side_vectors()[side]
    t = t / np.linalg.norm(t)
    if t[1] >= 0.0:
        rot = np.array([[t[1], -t[0]], [t[0], t[1]]])
    else:
        rot = np.array([[-t[1], t[0]], [-t[0], -t[1]]])
    rotated = make_polygon(p.vertices @ rot.T, p.side_labels)
    return rot, rotated


def polygon_from_json(data) -> LabeledPolygon:
    """Parse the polygon input format.

    Accepts a JSON string or a dict; either
    ``{"vertices": [[x, y], ...], "labels": ["D"|"N", ...]}`` or the triangle
    shorthand ``{"angles": [alpha, beta], "dirichlet": "L" | ["S", "M"]}``.
    """
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    if "angles" in data:
        spec = TriangleSpec(angles=tuple(data["angles"]),
                            dirichlet=tuple(data.get("dirichlet", ("L",)))
                            if isinstance(data.get("dirichlet", ("L",)), (list, tuple))
                            else (data["dirichlet"],))
        return make_triangle(spec)
    return make_polygon(data["vertices"], data["labels"])


def random_split_polygon(rng: np.random.Generator, n_sides: int,
                         angle_margin: float = 0.08,
                         min_edge: float = 0.15) -> LabeledPolygon:
    """Random convex n-gon for split sweeps: side 0 runs (0,0)-(1,0) and is
    the Neumann side, all others Dirichlet, and both junction angles are
    acute with margin ``angle_margin``.

    Rejection sampling off convex hulls of random points; deterministic for a
    seeded generator.
    """
    base = np.array([[0.0, 0.0], [1.0, 0.0]])
    while True:
        extra = rng.uniform([0.05, 0.15], [0.95, 1.1], size=(n_sides - 2, 2))
        pts = np.vstack([base, extra])
        hull = _convex_hull_ccw(pts)
        if hull is None or len(hull) != n_sides:
            continue
        i0 = int(np.where((pts[hull] == base[0]).all(axis=1))[0][0]) if (pts[hull] == base[0]).all(axis=1).any() else -1
        if i0 < 0:
            continue
        order = np.roll(hull, -i0)
        v = pts[order]
        if not np.allclose(v[0], base[0]) or not np.allclose(v[1], base[1]):
            continue
        edges = np.roll(v, -1, axis=0) - v
        if np.linalg.norm(edges, axis=1).min() < min_edge:
            continue
        if _cross(edges, np.roll(edges, -1, axis=0)).min() < 0.03:
            continue
        labels = [DIRICHLET] * n_sides
        labels[0] = NEUMANN
        try:
            poly = make_polygon(v, labels)
        except (NonConvexError, DegenerateEdgeError):
            continue
        if angle_condition_holds(poly, eps_angle=angle_margin):
            return poly


def _convex_hull_ccw(pts: np.ndarray) -> np.ndarray | None:
    """Indices of the convex hull in CCW order (monotone chain)."""
    order = np.lexsort((pts[:, 1], pts[:, 0]))

    def build(seq: Iterable[int]) -> list[int]:
        out: list[int] = []
        for i in seq:
            while len(out) >= 2 and _cross(pts[out[-1]] - pts[out[-2]], pts[i] - pts[out[-2]]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = build(order)
    upper = build(order[::-1])
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        return None
    return np.asarray(hull, dtype=int)
