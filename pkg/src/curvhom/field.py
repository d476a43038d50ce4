"""Scalar fields with exact derivative jets through order 3.

Jets are propagated through the expression program by third-order forward
(Taylor-mode) arithmetic, which is exact up to rounding.  A central
finite-difference oracle (``jet3_fd``) provides an independent cross-check
with the usual O(h^2) accuracy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import backends, expr
from .errors import DomainError


@dataclass(frozen=True)
class Jet3:
    """Value, gradient, Hessian, and third-derivative tensor at a point.

    ``hess`` is exactly symmetric and ``third`` is exactly invariant under
    all six index permutations (both are scattered from canonical entries).
    """

    value: float
    grad: np.ndarray   # (p,)
    hess: np.ndarray   # (p, p)
    third: np.ndarray  # (p, p, p)


@dataclass(frozen=True)
class FieldSpec:
    """An immutable scalar field on (a subset of) R^p."""

    p: int
    root: expr.Expr

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("dimension p must be >= 1")
        index = expr.max_var_index(self.root)
        if index > self.p:
            raise ValueError(
                f"expression references x{index} but the dimension is {self.p}"
            )

    @cached_property
    def program(self):
        return expr.compile_program(self.root, self.p)

    def to_source(self):
        return expr.to_source(self.root)

    def __str__(self):
        return self.to_source()

    def value(self, x):
        x = _check_point(self, x)
        return float(backends.eval_value(self.program, x))

    def values(self, xs):
        xs = np.asarray(xs, dtype=np.float64)
        if xs.ndim != 2 or xs.shape[1] != self.p:
            raise ValueError(f"expected points of shape (n, {self.p})")
        return backends.eval_values(self.program, xs)

    def jet(self, x):
        return jet3(self, x)


def _check_point(field, x):
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (field.p,):
        raise ValueError(f"expected a point of length {field.p}, got shape {x.shape}")
    return x


def parse_field(source, p):
    """Parse ``source`` into a FieldSpec of dimension ``p``."""
    return FieldSpec(p=p, root=expr.parse(source, p))


def jet3(field, x):
    """Exact derivatives of ``field`` at ``x`` through order 3."""
    x = _check_point(field, x)
    v, g, h, t = backends.eval_jet3(field.program, x)
    if not (np.isfinite(v) and np.all(np.isfinite(g)) and np.all(np.isfinite(h))
            and np.all(np.isfinite(t))):
        raise DomainError("jet evaluation produced non-finite entries")
    return Jet3(value=float(v), grad=g, hess=h, third=t)


def jet3_fd(field, x, h=1e-3):
    """Central finite-difference jet, the independent oracle for ``jet3``.

    All stencils are O(h^2); the point must lie in the domain with margin 2h
    along every axis.  Third-derivative entries carry roundoff of order
    eps*|f|/h^3, so comparisons should be made relative to the jet scale.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    x = _check_point(field, x)
    p = field.p

    offsets = {(): None}

    def key(*pairs):
        # pairs of (axis, multiple-of-h); canonical sorted form
        return tuple(sorted(pairs))

    for i in range(p):
        for s in (1, -1, 2, -2):
            offsets[key((i, s))] = None
    for i in range(p):
        for j in range(i + 1, p):
            for si in (1, -1):
                for sj in (1, -1):
                    offsets[key((i, si), (j, sj))] = None
    for i in range(p):
        for j in range(i + 1, p):
            for k in range(j + 1, p):
                for si in (1, -1):
                    for sj in (1, -1):
                        for sk in (1, -1):
                            offsets[key((i, si), (j, sj), (k, sk))] = None

    keys = list(offsets)
    pts = np.tile(x, (len(keys), 1))
    for row, pairs in enumerate(keys):
        for axis, mult in pairs:
            pts[row, axis] += mult * h
    vals = field.values(pts)
    if not np.all(np.isfinite(vals)):
        raise DomainError("finite-difference stencil produced non-finite values")
    f = dict(zip(keys, vals))

    value = f[()]
    grad = np.empty(p)
    hess = np.zeros((p, p))
    third = np.zeros((p, p, p))

    for i in range(p):
        grad[i] = (f[key((i, 1))] - f[key((i, -1))]) / (2 * h)
        hess[i, i] = (f[key((i, 1))] - 2 * value + f[key((i, -1))]) / h**2
    for i in range(p):
        for j in range(i + 1, p):
            hess[i, j] = hess[j, i] = (
                f[key((i, 1), (j, 1))] - f[key((i, 1), (j, -1))]
                - f[key((i, -1), (j, 1))] + f[key((i, -1), (j, -1))]
            ) / (4 * h**2)

    def fd3_aab(a, b):
        # d^3 f / dx_a^2 dx_b for a != b
        return (
            f[key((a, 1), (b, 1))] - 2 * f[key((b, 1))] + f[key((a, -1), (b, 1))]
            - f[key((a, 1), (b, -1))] + 2 * f[key((b, -1))]
            - f[key((a, -1), (b, -1))]
        ) / (2 * h**3)

    for i in range(p):
        for j in range(i, p):
            for k in range(j, p):
                if i == j == k:
                    val = (
                        f[key((i, 2))] - 2 * f[key((i, 1))]
                        + 2 * f[key((i, -1))] - f[key((i, -2))]
                    ) / (2 * h**3)
                elif i == j:
                    val = fd3_aab(i, k)
                elif j == k:
                    val = fd3_aab(j, i)
                else:
                    val = sum(
                        si * sj * sk * f[key((i, si), (j, sj), (k, sk))]
                        for si in (1, -1) for sj in (1, -1) for sk in (1, -1)
                    ) / (8 * h**3)
                for perm in {(i, j, k), (i, k, j), (j, i, k),
                             (j, k, i), (k, i, j), (k, j, i)}:
                    third[perm] = val

    return Jet3(value=float(value), grad=grad, hess=hess, third=third)


def jet_scale(*jets):
    """Largest absolute entry across the given jets (at least 0)."""
    scale = 0.0
    for j in jets:
        scale = max(scale, abs(j.value), np.abs(j.grad).max(),
                    np.abs(j.hess).max(), np.abs(j.third).max())
    return scale


def jet_deviation(a, b):
    """Max absolute entrywise difference between two jets."""
    return max(
        abs(a.value - b.value),
        np.abs(a.grad - b.grad).max(),
        np.abs(a.hess - b.hess).max(),
        np.abs(a.third - b.third).max(),
    )


def jets_agree(a, b, rtol=1e-5, atol=1e-8):
    """True when the jets agree within rtol relative to the common jet scale
    (with an atol floor for jets that are near zero overall)."""
    return jet_deviation(a, b) <= max(rtol * max(1.0, jet_scale(a, b)), atol)


def canonical_f(theta, p):
    """The field 0.5*(x1^2+...+xp^2) + theta(x1).

    ``theta`` may be declared in any dimension but must reference x1 only.
    """
    if expr.max_var_index(theta.root) > 1:
        raise ValueError("theta must depend on x1 only")
    quad = expr.Pow(expr.Var(1), 2)
    for i in range(2, p + 1):
        quad = expr.Add(quad, expr.Pow(expr.Var(i), 2))
    root = expr.Add(expr.Mul(expr.Const(0.5), quad), theta.root)
    return FieldSpec(p=p, root=expr.fold_constants(root))
