# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled element kernels; mirrors numpy_backend function for function.

Constants must stay in sync with tables.py (pinned by the backend agreement
test).
"""
import numpy as np

name = "cython"

cdef double QA = 0.44594849091596489
cdef double QB = 0.09157621350977074
cdef double WA = 0.11169079483900575
cdef double WB = 0.054975871827660934


cdef void _quad6(double* qx, double* qy, double* qw) noexcept nogil:
    qx[0] = QA; qy[0] = QA; qw[0] = WA
    qx[1] = 1.0 - 2.0 * QA; qy[1] = QA; qw[1] = WA
    qx[2] = QA; qy[2] = 1.0 - 2.0 * QA; qw[2] = WA
    qx[3] = QB; qy[3] = QB; qw[3] = WB
    qx[4] = 1.0 - 2.0 * QB; qy[4] = QB; qw[4] = WB
    qx[5] = QB; qy[5] = 1.0 - 2.0 * QB; qw[5] = WB


cdef void _p2_grad(double xi, double eta, double* gx, double* gy) noexcept nogil:
    cdef double lam = 1.0 - xi - eta
    gx[0] = 1.0 - 4.0 * lam; gy[0] = 1.0 - 4.0 * lam
    gx[1] = 4.0 * xi - 1.0;  gy[1] = 0.0
    gx[2] = 0.0;             gy[2] = 4.0 * eta - 1.0
    gx[3] = 4.0 * (lam - xi); gy[3] = -4.0 * xi
    gx[4] = 4.0 * eta;       gy[4] = 4.0 * xi
    gx[5] = -4.0 * eta;      gy[5] = 4.0 * (lam - eta)


cdef void _p2_vals(double xi, double eta, double* v) noexcept nogil:
    cdef double lam = 1.0 - xi - eta
    v[0] = lam * (2.0 * lam - 1.0)
    v[1] = xi * (2.0 * xi - 1.0)
    v[2] = eta * (2.0 * eta - 1.0)
    v[3] = 4.0 * lam * xi
    v[4] = 4.0 * xi * eta
    v[5] = 4.0 * eta * lam


cdef inline void _jacobian(const double[:, :, ::1] coords, Py_ssize_t e,
                           double* det, double* i00, double* i01,
                           double* i10, double* i11) noexcept nogil:
    cdef double d1x = coords[e, 1, 0] - coords[e, 0, 0]
    cdef double d1y = coords[e, 1, 1] - coords[e, 0, 1]
    cdef double d2x = coords[e, 2, 0] - coords[e, 0, 0]
    cdef double d2y = coords[e, 2, 1] - coords[e, 0, 1]
    det[0] = d1x * d2y - d1y * d2x
    i00[0] = d2y / det[0]
    i01[0] = -d2x / det[0]
    i10[0] = -d1y / det[0]
    i11[0] = d1x / det[0]


def p1_element_matrices(const double[:, :, ::1] coords):
    cdef Py_ssize_t ne = coords.shape[0]
    ke_arr = np.zeros((ne, 3, 3))
    me_arr = np.empty((ne, 3, 3))
    cdef double[:, :, ::1] ke = ke_arr
    cdef double[:, :, ::1] me = me_arr
    # reference mass of P1 with the 3-point rule (exact): diag 1/12, off 1/24
    cdef double det, i00, i01, i10, i11, area
    cdef double gx[3]
    cdef double gy[3]
    cdef double px, py
    cdef Py_ssize_t e, i, j
    # reference gradients
    cdef double rgx[3]
    cdef double rgy[3]
    rgx[0] = -1.0; rgy[0] = -1.0
    rgx[1] = 1.0;  rgy[1] = 0.0
    rgx[2] = 0.0;  rgy[2] = 1.0
    for e in range(ne):
        _jacobian(coords, e, &det, &i00, &i01, &i10, &i11)
        area = 0.5 * det
        for i in range(3):
            gx[i] = rgx[i] * i00 + rgy[i] * i10
            gy[i] = rgx[i] * i01 + rgy[i] * i11
        for i in range(3):
            for j in range(3):
                ke[e, i, j] = area * (gx[i] * gx[j] + gy[i] * gy[j])
                me[e, i, j] = det * (1.0 / 24.0)
            me[e, i, i] = det * (1.0 / 12.0)
    return ke_arr, me_arr


def p2_element_matrices(const double[:, :, ::1] coords):
    cdef Py_ssize_t ne = coords.shape[0]
    ke_arr = np.zeros((ne, 6, 6))
    me_arr = np.zeros((ne, 6, 6))
    cdef double[:, :, ::1] ke = ke_arr
    cdef double[:, :, ::1] me = me_arr
    cdef double qx[6]
    cdef double qy[6]
    cdef double qw[6]
    cdef double grx[6]
    cdef double gry[6]
    cdef double vals[6]
    cdef double gx[6]
    cdef double gy[6]
    cdef double det, i00, i01, i10, i11, w
    cdef Py_ssize_t e, q, i, j
    _quad6(qx, qy, qw)
    for e in range(ne):
        _jacobian(coords, e, &det, &i00, &i01, &i10, &i11)
        for q in range(6):
            _p2_grad(qx[q], qy[q], grx, gry)
            _p2_vals(qx[q], qy[q], vals)
            w = qw[q] * det
            for i in range(6):
                gx[i] = grx[i] * i00 + gry[i] * i10
                gy[i] = grx[i] * i01 + gry[i] * i11
            for i in range(6):
                for j in range(6):
                    ke[e, i, j] += w * (gx[i] * gx[j] + gy[i] * gy[j])
                    me[e, i, j] += w * vals[i] * vals[j]
    return ke_arr, me_arr


def p2_element_hessians(const double[:, :, ::1] coords, const double[:, ::1] values):
    cdef Py_ssize_t ne = coords.shape[0]
    out_arr = np.empty((ne, 3))
    cdef double[:, ::1] out = out_arr
    # reference Hessians [dxx, dxy, dyy] of the P2 basis
    cdef double hxx[6]
    cdef double hxy[6]
    cdef double hyy[6]
    hxx[0] = 4.0;  hxy[0] = 4.0;  hyy[0] = 4.0
    hxx[1] = 4.0;  hxy[1] = 0.0;  hyy[1] = 0.0
    hxx[2] = 0.0;  hxy[2] = 0.0;  hyy[2] = 4.0
    hxx[3] = -8.0; hxy[3] = -4.0; hyy[3] = 0.0
    hxx[4] = 0.0;  hxy[4] = 4.0;  hyy[4] = 0.0
    hxx[5] = 0.0;  hxy[5] = -4.0; hyy[5] = -8.0
    cdef double det, i00, i01, i10, i11
    cdef double rxx, rxy, ryy, c
    cdef double t00, t01, t10, t11
    cdef Py_ssize_t e, i
    for e in range(ne):
        _jacobian(coords, e, &det, &i00, &i01, &i10, &i11)
        rxx = 0.0; rxy = 0.0; ryy = 0.0
        for i in range(6):
            c = values[e, i]
            rxx += c * hxx[i]
            rxy += c * hxy[i]
            ryy += c * hyy[i]
        # H_x = Jinv^T Href Jinv with Jinv rows (i00 i01; i10 i11)
        t00 = rxx * i00 + rxy * i10
        t01 = rxx * i01 + rxy * i11
        t10 = rxy * i00 + ryy * i10
        t11 = rxy * i01 + ryy * i11
        out[e, 0] = i00 * t00 + i10 * t10
        out[e, 1] = i00 * t01 + i10 * t11
        out[e, 2] = i01 * t01 + i11 * t11
    return out_arr


def p2_h1_seminorm_elements(const double[:, :, ::1] coords, const double[:, ::1] values):
    cdef Py_ssize_t ne = coords.shape[0]
    out_arr = np.zeros(ne)
    cdef double[::1] out = out_arr
    cdef double qx[6]
    cdef double qy[6]
    cdef double qw[6]
    cdef double grx[6]
    cdef double gry[6]
    cdef double det, i00, i01, i10, i11, grefx, grefy, gxx, gyy
    cdef Py_ssize_t e, q, i
    _quad6(qx, qy, qw)
    for e in range(ne):
        _jacobian(coords, e, &det, &i00, &i01, &i10, &i11)
        for q in range(6):
            _p2_grad(qx[q], qy[q], grx, gry)
            grefx = 0.0; grefy = 0.0
            for i in range(6):
                grefx += values[e, i] * grx[i]
                grefy += values[e, i] * gry[i]
            gxx = grefx * i00 + grefy * i10
            gyy = grefx * i01 + grefy * i11
            out[e] += qw[q] * det * (gxx * gxx + gyy * gyy)
    return out_arr


def p2_directional_p1_load(const double[:, :, ::1] coords, const double[:, ::1] values,
                           direction):
    cdef Py_ssize_t ne = coords.shape[0]
    out_arr = np.zeros((ne, 3))
    cdef double[:, ::1] out = out_arr
    cdef double dx = float(direction[0])
    cdef double dy = float(direction[1])
    # 3-point rule at edge midpoints
    cdef double qx[3]
    cdef double qy[3]
    qx[0] = 0.5; qy[0] = 0.0
    qx[1] = 0.5; qy[1] = 0.5
    qx[2] = 0.0; qy[2] = 0.5
    cdef double w = 1.0 / 6.0
    cdef double grx[6]
    cdef double gry[6]
    cdef double v1[3]
    cdef double det, i00, i01, i10, i11, grefx, grefy, g, lam
    cdef Py_ssize_t e, q, i
    for e in range(ne):
        _jacobian(coords, e, &det, &i00, &i01, &i10, &i11)
        for q in range(3):
            lam = 1.0 - qx[q] - qy[q]
            v1[0] = lam; v1[1] = qx[q]; v1[2] = qy[q]
            _p2_grad(qx[q], qy[q], grx, gry)
            grefx = 0.0; grefy = 0.0
            for i in range(6):
                grefx += values[e, i] * grx[i]
                grefy += values[e, i] * gry[i]
            g = (grefx * i00 + grefy * i10) * dx + (grefx * i01 + grefy * i11) * dy
            for i in range(3):
                out[e, i] += w * det * v1[i] * g
    return out_arr
