# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the batched kernels in ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs, log, pow, sqrt

cnp.import_array()


def interval_flags(const double[:, :] d, const double[:, :] dfc, double rtol):
    cdef Py_ssize_t n_t = d.shape[0], n = d.shape[1], t, i
    cdef double upper, lower, s, a
    out = np.zeros(n_t, dtype=np.uint8)
    cdef unsigned char[:] flags = out
    for t in range(n_t):
        upper = d[t, 0] + dfc[t, 0]
        lower = fabs(d[t, 0] - dfc[t, 0])
        for i in range(1, n):
            s = d[t, i] + dfc[t, i]
            a = fabs(d[t, i] - dfc[t, i])
            if s < upper:
                upper = s
            if a > lower:
                lower = a
        flags[t] = upper < lower - rtol * upper
    return out


def group_dhat(const double[:, :] pr, const double[:, :, :] xy, double r_neighbor,
               double assumed_p_t, const double[:] c_est, const double[:] g_est):
    cdef Py_ssize_t n_t = pr.shape[0], n = pr.shape[1], t, i, j
    cdef double dx, dy, acc, cnt
    out = np.empty((n_t, n), dtype=np.float64)
    cdef double[:, :] dhat = out
    for t in range(n_t):
        for i in range(n):
            acc = 0.0
            cnt = 0.0
            for j in range(n):
                if j != i:
                    dx = xy[t, i, 0] - xy[t, j, 0]
                    dy = xy[t, i, 1] - xy[t, j, 1]
                    if sqrt(dx * dx + dy * dy) > r_neighbor:
                        continue
                acc += pr[t, j]
                cnt += 1.0
            dhat[t, i] = pow(10.0, ((assumed_p_t - acc / cnt) - c_est[t]) / g_est[t])
    return out


cdef inline double _sigmoid(double z) nogil:
    return 1.0 / (1.0 + exp(-z))


def sgd_epoch(double[:, :] w1, double[:] b1, double[:, :] w2, double[:] b2,
              const double[:, :] x, const double[:, :] y, const cnp.int64_t[:] order,
              double lr, bint cross_entropy):
    cdef Py_ssize_t n_in = w1.shape[1], n_hid = w1.shape[0], n_out = w2.shape[0]
    cdef Py_ssize_t k, s, i, j
    cdef double total = 0.0, z, o_k, t_k
    cdef double h[64]
    cdef double o[64]
    cdef double delta_o[64]
    cdef double delta_h[64]
    if n_hid > 64 or n_out > 64:
        raise ValueError("layer too wide for the compiled kernel")
    for k in range(order.shape[0]):
        s = order[k]
        for i in range(n_hid):
            z = b1[i]
            for j in range(n_in):
                z += w1[i, j] * x[s, j]
            h[i] = _sigmoid(z)
        for i in range(n_out):
            z = b2[i]
            for j in range(n_hid):
                z += w2[i, j] * h[j]
            o[i] = _sigmoid(z)
        for i in range(n_out):
            o_k = o[i]
            t_k = y[s, i]
            if cross_entropy:
                total -= t_k * log(o_k) + (1.0 - t_k) * log(1.0 - o_k)
                delta_o[i] = o_k - t_k
            else:
                total += 0.5 * (o_k - t_k) * (o_k - t_k)
                delta_o[i] = (o_k - t_k) * o_k * (1.0 - o_k)
        for j in range(n_hid):
            z = 0.0
            for i in range(n_out):
                z += w2[i, j] * delta_o[i]
            delta_h[j] = z * h[j] * (1.0 - h[j])
        for i in range(n_out):
            for j in range(n_hid):
                w2[i, j] -= lr * delta_o[i] * h[j]
            b2[i] -= lr * delta_o[i]
        for i in range(n_hid):
            for j in range(n_in):
                w1[i, j] -= lr * delta_h[i] * x[s, j]
            b1[i] -= lr * delta_h[i]
    return total
