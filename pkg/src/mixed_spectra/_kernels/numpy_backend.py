"""Pure NumPy element kernels (fallback when the compiled core is absent).

Every function takes element corner coordinates as an (ne, 3, 2) array and is
vectorized over elements.  Outputs are per-element quantities; global
assembly/summation happens in the calling layer so both backends share it.
"""
import numpy as np

from .tables import QP3, QP6, QW3, QW6, P2_HESS, p1_shape, p2_shape

name = "numpy"


def _geometry(coords):
    """Jacobian determinant (= 2*area) and inverse Jacobian per element."""
    d1 = coords[:, 1] - coords[:, 0]
    d2 = coords[:, 2] - coords[:, 0]
    det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
    inv = np.empty((len(coords), 2, 2))
    inv[:, 0, 0] = d2[:, 1]
    inv[:, 0, 1] = -d2[:, 0]
    inv[:, 1, 0] = -d1[:, 1]
    inv[:, 1, 1] = d1[:, 0]
    inv /= det[:, None, None]
    return det, inv


def _element_matrices(coords, shape_fn, points, weights):
    vals, grads = shape_fn(points)
    det, inv = _geometry(coords)
    nl = vals.shape[1]
    ke = np.zeros((len(coords), nl, nl))
    me = np.zeros((len(coords), nl, nl))
    for q in range(len(weights)):
        gx = np.einsum("lk,eki->eli", grads[q], inv)  # physical gradients
        ke += weights[q] * det[:, None, None] * np.einsum("eli,emi->elm", gx, gx)
        me += weights[q] * det[:, None, None] * np.outer(vals[q], vals[q])[None]
    return ke, me


def p1_element_matrices(coords):
    """(stiffness, mass) element matrices for P1, shapes (ne, 3, 3)."""
    return _element_matrices(coords, p1_shape, QP3, QW3)


def p2_element_matrices(coords):
    """(stiffness, mass) element matrices for P2, shapes (ne, 6, 6)."""
    return _element_matrices(coords, p2_shape, QP6, QW6)


def p2_element_hessians(coords, values):
    """Constant physical Hessian [uxx, uxy, uyy] per element, shape (ne, 3).

    ``values`` holds the six local P2 coefficients per element.
    """
    _, inv = _geometry(coords)
    href = values @ P2_HESS  # (ne, 3) reference [dxx, dxy, dyy]
    hm = np.empty((len(coords), 2, 2))
    hm[:, 0, 0] = href[:, 0]
    hm[:, 0, 1] = hm[:, 1, 0] = href[:, 1]
    hm[:, 1, 1] = href[:, 2]
    hx = np.einsum("eki,ekl,elj->eij", inv, hm, inv)
    return np.stack([hx[:, 0, 0], hx[:, 0, 1], hx[:, 1, 1]], axis=1)


def p2_h1_seminorm_elements(coords, values):
    """Per-element integral of |grad u|^2 for a P2 function, shape (ne,)."""
    _, grads = p2_shape(QP6)
    det, inv = _geometry(coords)
    out = np.zeros(len(coords))
    for q in range(len(QW6)):
        gref = values @ grads[q]                    # (ne, 2)
        gx = np.einsum("ei,eij->ej", gref, inv)
        out += QW6[q] * det * np.einsum("ej,ej->e", gx, gx)
    return out


def p2_directional_p1_load(coords, values, direction):
    """P1 load vectors b_i = int phi_i (grad u . d) per element, shape (ne, 3).

    The integrand is quadratic, so the 3-point rule is exact.
    """
    vals1, _ = p1_shape(QP3)
    _, grads2 = p2_shape(QP3)
    det, inv = _geometry(coords)
    d = np.asarray(direction, dtype=float)
    out = np.zeros((len(coords), 3))
    for q in range(len(QW3)):
        gref = values @ grads2[q]
        gx = np.einsum("ei,eij->ej", gref, inv)
        g = gx @ d
        out += QW3[q] * det[:, None] * vals1[q][None, :] * g[:, None]
    return out
