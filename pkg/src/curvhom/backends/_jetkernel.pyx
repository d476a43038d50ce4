# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled jet backend.

Twin of ``pure.py``: identical operation order and parenthesization per
canonical entry, same libm transcendentals.  Built with -ffp-contract=off so
results are bit-identical to the pure backend.  Opcode numbering matches
``curvhom.expr``.
"""

import numpy as np

from curvhom.errors import DomainError

from libc.math cimport sin, cos, exp, log

cdef enum:
    OP_CONST = 0
    OP_VAR = 1
    OP_ADD = 2
    OP_SUB = 3
    OP_MUL = 4
    OP_DIV = 5
    OP_NEG = 6
    OP_POW = 7
    OP_SIN = 8
    OP_COS = 9
    OP_EXP = 10
    OP_LOG = 11


cdef inline double _ipow(double u, int n) noexcept:
    # callers guard u == 0 with n < 0
    if n < 0:
        return 1.0 / _ipow(u, -n)
    cdef double r = 1.0
    cdef int t
    for t in range(n):
        r = r * u
    return r


cdef double _scalar(const int[:, ::1] code, const double[::1] consts,
                    const double[::1] x, double[::1] regs) except? -1e308:
    cdef Py_ssize_t r
    cdef int op, a, b
    cdef double u
    for r in range(code.shape[0]):
        op = code[r, 0]
        a = code[r, 1]
        b = code[r, 2]
        if op == OP_CONST:
            regs[r] = consts[b]
        elif op == OP_VAR:
            regs[r] = x[b]
        elif op == OP_ADD:
            regs[r] = regs[a] + regs[b]
        elif op == OP_SUB:
            regs[r] = regs[a] - regs[b]
        elif op == OP_MUL:
            regs[r] = regs[a] * regs[b]
        elif op == OP_DIV:
            if regs[b] == 0.0:
                raise DomainError("division by zero")
            regs[r] = regs[a] / regs[b]
        elif op == OP_NEG:
            regs[r] = -regs[a]
        elif op == OP_POW:
            u = regs[a]
            if b < 0 and u == 0.0:
                raise DomainError("zero raised to a negative power")
            regs[r] = _ipow(u, b)
        elif op == OP_SIN:
            regs[r] = sin(regs[a])
        elif op == OP_COS:
            regs[r] = cos(regs[a])
        elif op == OP_EXP:
            regs[r] = exp(regs[a])
        else:
            if regs[a] <= 0.0:
                raise DomainError("log of a non-positive value")
            regs[r] = log(regs[a])
    return regs[code.shape[0] - 1]


def eval_value(const int[:, ::1] code, const double[::1] consts,
               const double[::1] x):
    regs = np.empty(code.shape[0])
    return _scalar(code, consts, x, regs)


def eval_values(const int[:, ::1] code, const double[::1] consts,
                const double[:, ::1] xs):
    cdef Py_ssize_t r
    out_arr = np.empty(xs.shape[0])
    regs_arr = np.empty(code.shape[0])
    cdef double[::1] out = out_arr
    cdef double[::1] regs = regs_arr
    for r in range(xs.shape[0]):
        out[r] = _scalar(code, consts, xs[r], regs)
    return out_arr


def eval_jet3(const int[:, ::1] code, const double[::1] consts,
              const double[::1] x,
              const int[::1] I2, const int[::1] J2,
              const int[::1] I3, const int[::1] J3, const int[::1] K3,
              const int[::1] HIJ, const int[::1] HIK, const int[::1] HJK):
    cdef Py_ssize_t n = code.shape[0]
    cdef int p = x.shape[0]
    cdef Py_ssize_t n2 = I2.shape[0]
    cdef Py_ssize_t n3 = I3.shape[0]

    vals_arr = np.zeros(n)
    grads_arr = np.zeros((n, p))
    h2s_arr = np.zeros((n, n2))
    h3s_arr = np.zeros((n, n3))
    cdef double[::1] vals = vals_arr
    cdef double[:, ::1] grads = grads_arr
    cdef double[:, ::1] h2s = h2s_arr
    cdef double[:, ::1] h3s = h3s_arr

    cdef Py_ssize_t r, t
    cdef int op, a, b, i, j, k
    cdef double uv, vv, wv, u, s, c, e, iu
    cdef double d0, d1, d2, d3, c1, c2, c3

    for r in range(n):
        op = code[r, 0]
        a = code[r, 1]
        b = code[r, 2]
        if op == OP_CONST:
            vals[r] = consts[b]
        elif op == OP_VAR:
            vals[r] = x[b]
            grads[r, b] = 1.0
        elif op == OP_ADD:
            vals[r] = vals[a] + vals[b]
            for t in range(p):
                grads[r, t] = grads[a, t] + grads[b, t]
            for t in range(n2):
                h2s[r, t] = h2s[a, t] + h2s[b, t]
            for t in range(n3):
                h3s[r, t] = h3s[a, t] + h3s[b, t]
        elif op == OP_SUB:
            vals[r] = vals[a] - vals[b]
            for t in range(p):
                grads[r, t] = grads[a, t] - grads[b, t]
            for t in range(n2):
                h2s[r, t] = h2s[a, t] - h2s[b, t]
            for t in range(n3):
                h3s[r, t] = h3s[a, t] - h3s[b, t]
        elif op == OP_NEG:
            vals[r] = -vals[a]
            for t in range(p):
                grads[r, t] = -grads[a, t]
            for t in range(n2):
                h2s[r, t] = -h2s[a, t]
            for t in range(n3):
                h3s[r, t] = -h3s[a, t]
        elif op == OP_MUL:
            uv = vals[a]
            vv = vals[b]
            vals[r] = uv * vv
            for t in range(p):
                grads[r, t] = grads[a, t] * vv + uv * grads[b, t]
            for t in range(n2):
                i = I2[t]
                j = J2[t]
                h2s[r, t] = (h2s[a, t] * vv
                             + (grads[a, i] * grads[b, j]
                                + grads[a, j] * grads[b, i])) + uv * h2s[b, t]
            for t in range(n3):
                i = I3[t]
                j = J3[t]
                k = K3[t]
                h3s[r, t] = ((h3s[a, t] * vv
                              + ((h2s[a, HIJ[t]] * grads[b, k]
                                  + h2s[a, HIK[t]] * grads[b, j])
                                 + h2s[a, HJK[t]] * grads[b, i]))
                             + ((grads[a, i] * h2s[b, HJK[t]]
                                 + grads[a, j] * h2s[b, HIK[t]])
                                + grads[a, k] * h2s[b, HIJ[t]])) \
                    + uv * h3s[b, t]
        elif op == OP_DIV:
            uv = vals[a]
            vv = vals[b]
            if vv == 0.0:
                raise DomainError("division by zero")
            wv = uv / vv
            vals[r] = wv
            for t in range(p):
                grads[r, t] = (grads[a, t] - wv * grads[b, t]) / vv
            for t in range(n2):
                i = I2[t]
                j = J2[t]
                h2s[r, t] = ((h2s[a, t]
                              - (grads[r, i] * grads[b, j]
                                 + grads[r, j] * grads[b, i]))
                             - wv * h2s[b, t]) / vv
            for t in range(n3):
                i = I3[t]
                j = J3[t]
                k = K3[t]
                h3s[r, t] = (((h3s[a, t]
                               - ((h2s[r, HIJ[t]] * grads[b, k]
                                   + h2s[r, HIK[t]] * grads[b, j])
                                  + h2s[r, HJK[t]] * grads[b, i]))
                              - ((grads[r, i] * h2s[b, HJK[t]]
                                  + grads[r, j] * h2s[b, HIK[t]])
                                 + grads[r, k] * h2s[b, HIJ[t]]))
                             - wv * h3s[b, t]) / vv
        else:
            # unary chain rule with scalar derivatives d0..d3 at u
            u = vals[a]
            if op == OP_POW:
                if b < 0 and u == 0.0:
                    raise DomainError("zero raised to a negative power")
                c1 = <double> b
                c2 = <double> (b * (b - 1))
                c3 = <double> (b * (b - 1) * (b - 2))
                d0 = _ipow(u, b)
                d1 = c1 * _ipow(u, b - 1) if c1 != 0.0 else 0.0
                d2 = c2 * _ipow(u, b - 2) if c2 != 0.0 else 0.0
                d3 = c3 * _ipow(u, b - 3) if c3 != 0.0 else 0.0
            elif op == OP_SIN:
                s = sin(u)
                c = cos(u)
                d0 = s
                d1 = c
                d2 = -s
                d3 = -c
            elif op == OP_COS:
                s = sin(u)
                c = cos(u)
                d0 = c
                d1 = -s
                d2 = -c
                d3 = s
            elif op == OP_EXP:
                e = exp(u)
                d0 = e
                d1 = e
                d2 = e
                d3 = e
            else:
                if u <= 0.0:
                    raise DomainError("log of a non-positive value")
                iu = 1.0 / u
                d0 = log(u)
                d1 = iu
                d2 = -(iu * iu)
                d3 = 2.0 * ((iu * iu) * iu)
            vals[r] = d0
            for t in range(p):
                grads[r, t] = d1 * grads[a, t]
            for t in range(n2):
                i = I2[t]
                j = J2[t]
                h2s[r, t] = (d2 * (grads[a, i] * grads[a, j])) + (d1 * h2s[a, t])
            for t in range(n3):
                i = I3[t]
                j = J3[t]
                k = K3[t]
                h3s[r, t] = (d3 * ((grads[a, i] * grads[a, j]) * grads[a, k])
                             + d2 * ((h2s[a, HIJ[t]] * grads[a, k]
                                      + h2s[a, HIK[t]] * grads[a, j])
                                     + h2s[a, HJK[t]] * grads[a, i])) \
                    + d1 * h3s[a, t]

    r = n - 1
    return (vals[r], grads_arr[r].copy(), h2s_arr[r].copy(), h3s_arr[r].copy())
