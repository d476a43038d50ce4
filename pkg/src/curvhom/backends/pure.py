"""Pure-Python jet backend.

Bit-for-bit twin of the compiled kernel: every arithmetic expression below is
written with the same operand order and parenthesization as the loops in
``_jetkernel.pyx``, and transcendental functions go through libm (``math``),
so the two backends produce identical doubles.  Do not "simplify" the
parenthesization here without mirroring the change in the kernel.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..expr import (
    OP_ADD, OP_CONST, OP_COS, OP_DIV, OP_EXP, OP_LOG, OP_MUL, OP_NEG,
    OP_POW, OP_SIN, OP_SUB, OP_VAR,
)
from .tables import jet_tables

name = "pure"


def _ipow(u, n):
    if n < 0:
        if u == 0.0:
            raise DomainError("zero raised to a negative power")
        return 1.0 / _ipow(u, -n)
    r = 1.0
    for _ in range(n):
        r = r * u
    return r


def _exp(u):
    # libm exp overflows to inf; math.exp raises instead, so mirror C here
    try:
        return math.exp(u)
    except OverflowError:
        return math.inf


def _scalar(code, consts, x):
    regs = [0.0] * len(code)
    for r, (op, a, b) in enumerate(code):
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
            regs[r] = math.sin(regs[a])
        elif op == OP_COS:
            regs[r] = math.cos(regs[a])
        elif op == OP_EXP:
            regs[r] = _exp(regs[a])
        else:  # OP_LOG
            if regs[a] <= 0.0:
                raise DomainError("log of a non-positive value")
            regs[r] = math.log(regs[a])
    return regs[-1]


def eval_value(program, x):
    return _scalar(program.code.tolist(), [float(c) for c in program.consts],
                   [float(v) for v in x])


def eval_values(program, xs):
    code = program.code.tolist()
    consts = [float(c) for c in program.consts]
    xs = np.asarray(xs, dtype=np.float64)
    out = np.empty(len(xs))
    for r in range(len(xs)):
        out[r] = _scalar(code, consts, [float(v) for v in xs[r]])
    return out


def eval_jet3(program, x):
    """Return (value, grad, canonical-hess, canonical-third)."""
    p = program.p
    tab = jet_tables(p)
    I2, J2 = tab.I2, tab.J2
    I3, J3, K3 = tab.I3, tab.J3, tab.K3
    HIJ, HIK, HJK = tab.HIJ, tab.HIK, tab.HJK
    x = np.asarray(x, dtype=np.float64)

    code = program.code.tolist()
    consts = program.consts
    n = len(code)
    vals = [0.0] * n
    grads = [None] * n
    h2s = [None] * n
    h3s = [None] * n
    zg = np.zeros(p)
    z2 = np.zeros(tab.n2)
    z3 = np.zeros(tab.n3)

    def unary(a, d0, d1, d2, d3):
        ug, u2, u3 = grads[a], h2s[a], h3s[a]
        wg = d1 * ug
        w2 = (d2 * (ug[I2] * ug[J2])) + (d1 * u2)
        w3 = (d3 * ((ug[I3] * ug[J3]) * ug[K3])
              + d2 * ((u2[HIJ] * ug[K3] + u2[HIK] * ug[J3]) + u2[HJK] * ug[I3])) \
            + d1 * u3
        return d0, wg, w2, w3

    for r, (op, a, b) in enumerate(code):
        if op == OP_CONST:
            vals[r], grads[r], h2s[r], h3s[r] = float(consts[b]), zg, z2, z3
        elif op == OP_VAR:
            g = np.zeros(p)
            g[b] = 1.0
            vals[r], grads[r], h2s[r], h3s[r] = float(x[b]), g, z2, z3
        elif op == OP_ADD:
            vals[r] = vals[a] + vals[b]
            grads[r] = grads[a] + grads[b]
            h2s[r] = h2s[a] + h2s[b]
            h3s[r] = h3s[a] + h3s[b]
        elif op == OP_SUB:
            vals[r] = vals[a] - vals[b]
            grads[r] = grads[a] - grads[b]
            h2s[r] = h2s[a] - h2s[b]
            h3s[r] = h3s[a] - h3s[b]
        elif op == OP_NEG:
            vals[r] = -vals[a]
            grads[r] = -grads[a]
            h2s[r] = -h2s[a]
            h3s[r] = -h3s[a]
        elif op == OP_MUL:
            uv, vv = vals[a], vals[b]
            ug, vg = grads[a], grads[b]
            u2, v2 = h2s[a], h2s[b]
            u3, v3 = h3s[a], h3s[b]
            vals[r] = uv * vv
            grads[r] = ug * vv + uv * vg
            h2s[r] = (u2 * vv + (ug[I2] * vg[J2] + ug[J2] * vg[I2])) + uv * v2
            h3s[r] = ((u3 * vv
                       + ((u2[HIJ] * vg[K3] + u2[HIK] * vg[J3]) + u2[HJK] * vg[I3]))
                      + ((ug[I3] * v2[HJK] + ug[J3] * v2[HIK]) + ug[K3] * v2[HIJ])) \
                + uv * v3
        elif op == OP_DIV:
            uv, vv = vals[a], vals[b]
            if vv == 0.0:
                raise DomainError("division by zero")
            ug, vg = grads[a], grads[b]
            u2, v2 = h2s[a], h2s[b]
            u3, v3 = h3s[a], h3s[b]
            wv = uv / vv
            wg = (ug - wv * vg) / vv
            w2 = ((u2 - (wg[I2] * vg[J2] + wg[J2] * vg[I2])) - wv * v2) / vv
            w3 = (((u3
                    - ((w2[HIJ] * vg[K3] + w2[HIK] * vg[J3]) + w2[HJK] * vg[I3]))
                   - ((wg[I3] * v2[HJK] + wg[J3] * v2[HIK]) + wg[K3] * v2[HIJ]))
                  - wv * v3) / vv
            vals[r], grads[r], h2s[r], h3s[r] = wv, wg, w2, w3
        elif op == OP_POW:
            u = vals[a]
            if b < 0 and u == 0.0:
                raise DomainError("zero raised to a negative power")
            c1 = float(b)
            c2 = float(b * (b - 1))
            c3 = float(b * (b - 1) * (b - 2))
            d0 = _ipow(u, b)
            d1 = c1 * _ipow(u, b - 1) if c1 != 0.0 else 0.0
            d2 = c2 * _ipow(u, b - 2) if c2 != 0.0 else 0.0
            d3 = c3 * _ipow(u, b - 3) if c3 != 0.0 else 0.0
            vals[r], grads[r], h2s[r], h3s[r] = unary(a, d0, d1, d2, d3)
        elif op == OP_SIN:
            u = vals[a]
            s, c = math.sin(u), math.cos(u)
            vals[r], grads[r], h2s[r], h3s[r] = unary(a, s, c, -s, -c)
        elif op == OP_COS:
            u = vals[a]
            s, c = math.sin(u), math.cos(u)
            vals[r], grads[r], h2s[r], h3s[r] = unary(a, c, -s, -c, s)
        elif op == OP_EXP:
            e = _exp(vals[a])
            vals[r], grads[r], h2s[r], h3s[r] = unary(a, e, e, e, e)
        else:  # OP_LOG
            u = vals[a]
            if u <= 0.0:
                raise DomainError("log of a non-positive value")
            iu = 1.0 / u
            vals[r], grads[r], h2s[r], h3s[r] = unary(
                a, math.log(u), iu, -(iu * iu), 2.0 * ((iu * iu) * iu)
            )

    return vals[-1], grads[-1].copy(), h2s[-1].copy(), h3s[-1].copy()
