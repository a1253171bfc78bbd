"""Reference-element tables shared by the kernel backends.

Reference triangle: (0,0), (1,0), (0,1).  Local P2 dofs: three vertices then
the midpoints of edges (0-1), (1-2), (2-0).  Quadrature weights sum to the
reference area 1/2; the 3-point rule is exact through degree 2, the 6-point
rule through degree 4, which makes every assembled integrand exact (P1:
degree <= 2, P2: degree <= 4).

The compiled backend hardcodes the same constants; the cross-backend
agreement test pins them together.
"""
import numpy as np

QP3 = np.array([[0.5, 0.0], [0.5, 0.5], [0.0, 0.5]])
QW3 = np.array([1.0 / 6.0] * 3)

_QA = 0.44594849091596489
_QB = 0.09157621350977074
QP6 = np.array([
    [_QA, _QA], [1.0 - 2.0 * _QA, _QA], [_QA, 1.0 - 2.0 * _QA],
    [_QB, _QB], [1.0 - 2.0 * _QB, _QB], [_QB, 1.0 - 2.0 * _QB],
])
QW6 = np.array([0.11169079483900575] * 3 + [0.054975871827660934] * 3)


def p1_shape(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values (nq, 3) and reference gradients (nq, 3, 2) of the P1 basis."""
    xi, eta = points[:, 0], points[:, 1]
    vals = np.stack([1.0 - xi - eta, xi, eta], axis=1)
    grads = np.broadcast_to(
        np.array([[-1.0, -1.0], [1.0, 0.0], [0.0, 1.0]]), (len(points), 3, 2)
    ).copy()
    return vals, grads


def p2_shape(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Values (nq, 6) and reference gradients (nq, 6, 2) of the P2 basis."""
    xi, eta = points[:, 0], points[:, 1]
    lam = 1.0 - xi - eta
    vals = np.stack([
        lam * (2.0 * lam - 1.0),
        xi * (2.0 * xi - 1.0),
        eta * (2.0 * eta - 1.0),
        4.0 * lam * xi,
        4.0 * xi * eta,
        4.0 * eta * lam,
    ], axis=1)
    grads = np.zeros((len(points), 6, 2))
    grads[:, 0, 0] = 1.0 - 4.0 * lam
    grads[:, 0, 1] = 1.0 - 4.0 * lam
    grads[:, 1, 0] = 4.0 * xi - 1.0
    grads[:, 2, 1] = 4.0 * eta - 1.0
    grads[:, 3, 0] = 4.0 * (lam - xi)
    grads[:, 3, 1] = -4.0 * xi
    grads[:, 4, 0] = 4.0 * eta
    grads[:, 4, 1] = 4.0 * xi
    grads[:, 5, 0] = -4.0 * eta
    grads[:, 5, 1] = 4.0 * (lam - eta)
    return vals, grads


#: Constant reference Hessians [dxx, dxy, dyy] of the six P2 basis functions.
P2_HESS = np.array([
    [4.0, 4.0, 4.0],
    [4.0, 0.0, 0.0],
    [0.0, 0.0, 4.0],
    [-8.0, -4.0, 0.0],
    [0.0, 4.0, 0.0],
    [0.0, -4.0, -8.0],
])
