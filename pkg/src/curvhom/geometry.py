"""Metric, embedding, second fundamental form, and curvature.

The metric on R^{2p} (coordinates x_1..x_p, y_1..y_p) is

    g(dx_i, dx_j) = f_,i f_,j      g(dx_i, dy_j) = delta_ij      g(dy, dy) = 0

with inverse blocks [[0, I], [I, -grad grad^T]].  It is induced from a flat
embedding into a (p, p+1) inner-product space, with second fundamental form
L = Hess f on the x-block.  Curvature is computed along two independent
routes: the product form L#L - L#L (Gauss) and the derivative of the
Christoffel symbols of the metric (Levi-Civita); they must agree.

Curvature tensors are stored densely on the x-block only: every component
with a y-slot vanishes identically, which ``full_tensor_checks`` confirms
from the full 2p-dimensional Christoffel data without assuming it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import HypothesisError
from .field import jet3

#: Largest supported dimension p for dense tensor storage (x-block tensors
#: have p^5 entries).  Raise at your own risk; memory grows as (2p)^5 in the
#: full verification path.
MAX_P = 8


def _check_p(p):
    if p > MAX_P:
        raise ValueError(f"dimension p={p} exceeds the supported cap {MAX_P}")


@dataclass(frozen=True)
class Point:
    """A point (x, y); only x must lie in the field's domain."""

    x: np.ndarray
    y: np.ndarray

    @classmethod
    def of(cls, x, y=None):
        x = np.asarray(x, dtype=np.float64)
        y = np.zeros_like(x) if y is None else np.asarray(y, dtype=np.float64)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError("x and y must be equal-length vectors")
        return cls(x=x, y=y)

    @classmethod
    def from_flat(cls, coords, p):
        coords = np.asarray(coords, dtype=np.float64)
        if coords.shape != (2 * p,):
            raise ValueError(f"expected {2 * p} coordinates, got {coords.shape}")
        return cls(x=coords[:p], y=coords[p:])

    @property
    def p(self):
        return len(self.x)


@dataclass(frozen=True)
class SecondFF:
    """Second fundamental form restricted to the x-distribution."""

    matrix: np.ndarray
    positive_definite: bool


def try_cholesky(matrix, pivot_tol=1e-12):
    """Lower-triangular factor with positive pivots, or None when a pivot
    fails to exceed ``pivot_tol`` (the positive-definiteness test)."""
    a = np.asarray(matrix, dtype=np.float64)
    n = a.shape[0]
    c = np.zeros_like(a)
    for j in range(n):
        d = a[j, j] - c[j, :j] @ c[j, :j]
        if not d > pivot_tol:
            return None
        c[j, j] = math.sqrt(d)
        for i in range(j + 1, n):
            c[i, j] = (a[i, j] - c[i, :j] @ c[j, :j]) / c[j, j]
    return c


def is_positive_definite(matrix, pivot_tol=1e-12):
    return try_cholesky(matrix, pivot_tol) is not None


def metric_at(field, point):
    """The 2p x 2p metric in the coordinate frame (dx_1..dx_p, dy_1..dy_p)."""
    p = field.p
    _check_p(p)
    grad = jet3(field, point.x).grad
    g = np.zeros((2 * p, 2 * p))
    g[:p, :p] = np.outer(grad, grad)
    g[:p, p:] = np.eye(p)
    g[p:, :p] = np.eye(p)
    return g


def metric_inverse_at(field, point):
    """Inverse metric, in closed form: [[0, I], [I, -grad grad^T]]."""
    p = field.p
    grad = jet3(field, point.x).grad
    ginv = np.zeros((2 * p, 2 * p))
    ginv[:p, p:] = np.eye(p)
    ginv[p:, :p] = np.eye(p)
    ginv[p:, p:] = -np.outer(grad, grad)
    return ginv


def signature_counts(matrix, tol=1e-9):
    """(positive, negative) eigenvalue counts of a symmetric matrix."""
    eig = np.linalg.eigvalsh(matrix)
    return int((eig > tol).sum()), int((eig < -tol).sum())


def ambient_inner_matrix(p):
    """Inner product on the flat ambient space, basis (u_1..u_p, v_1..v_p, w)."""
    w = np.zeros((2 * p + 1, 2 * p + 1))
    w[:p, p:2 * p] = np.eye(p)
    w[p:2 * p, :p] = np.eye(p)
    w[2 * p, 2 * p] = 1.0
    return w


def embed_and_normal(field, point):
    """Embedding position F and unit normal of the graph hypersurface.

    F = (x, y, f(x)) in the basis (u_i, v_i, w); the normal is
    w - sum_i f_,i v_i, which has unit length and annihilates all tangents.
    """
    p = field.p
    jet = jet3(field, point.x)
    position = np.concatenate([point.x, point.y, [jet.value]])
    normal = np.concatenate([np.zeros(p), -jet.grad, [1.0]])
    return position, normal


def embedding_tangents(field, point):
    """Rows are the coordinate tangents dF/dx_i, dF/dy_i (2p x (2p+1))."""
    p = field.p
    jet = jet3(field, point.x)
    t = np.zeros((2 * p, 2 * p + 1))
    t[:p, :p] = np.eye(p)
    t[:p, 2 * p] = jet.grad
    t[p:, p:2 * p] = np.eye(p)
    return t


def pullback_embedding_metric(field, point):
    t = embedding_tangents(field, point)
    return t @ ambient_inner_matrix(field.p) @ t.T


def second_ff(field, point):
    """L(dx_i, dx_j) = f_,ij; slots in the y-distribution vanish."""
    hess = jet3(field, point.x).hess
    return SecondFF(matrix=hess, positive_definite=is_positive_definite(hess))


def christoffel(field, point):
    """Gamma_ijk = (d_i g_jk + d_j g_ik - d_k g_ij) / 2 on the x-block,
    assembled from metric derivatives (for this family it equals
    f_,ij f_,k, which tests verify against this definition)."""
    jet = jet3(field, point.x)
    grad, hess = jet.grad, jet.hess
    # dg[m, a, b] = d_m (f_,a f_,b)
    dg = np.einsum("am,b->mab", hess, grad) + np.einsum("a,bm->mab", grad, hess)
    return 0.5 * (dg + np.einsum("jik->ijk", dg) - np.einsum("kij->ijk", dg))


def curvature_gauss(second_form):
    """R_ijkl = L_il L_jk - L_ik L_jl from the second fundamental form."""
    l = second_form.matrix if isinstance(second_form, SecondFF) else second_form
    l = np.asarray(l, dtype=np.float64)
    return np.einsum("il,jk->ijkl", l, l) - np.einsum("ik,jl->ijkl", l, l)


def curvature_levi_civita(field, point):
    """R_ijkl = d_i Gamma_jkl - d_j Gamma_ikl, with the Christoffel symbols
    differentiated from third-order jets of the metric coefficients."""
    jet = jet3(field, point.x)
    grad, hess, third = jet.grad, jet.hess, jet.third
    # d2g[m, n, a, b] = d_m d_n (f_,a f_,b)
    d2g = (np.einsum("amn,b->mnab", third, grad)
           + np.einsum("am,bn->mnab", hess, hess)
           + np.einsum("an,bm->mnab", hess, hess)
           + np.einsum("a,bmn->mnab", grad, third))
    # dgamma[m, b, c, d] = d_m Gamma_bcd
    dgamma = 0.5 * (d2g + np.einsum("mcbd->mbcd", d2g)
                    - np.einsum("mdbc->mbcd", d2g))
    return dgamma - np.einsum("jikl->ijkl", dgamma)


def nabla_curvature(field, point):
    """Covariant derivative of R on the x-block:
    (nabla R)_ijkl;n = f_,iln f_,jk + f_,il f_,jkn - f_,ikn f_,jl - f_,ik f_,jln.
    """
    _check_p(field.p)
    jet = jet3(field, point.x)
    hess, third = jet.hess, jet.third
    return (np.einsum("iln,jk->ijkln", third, hess)
            + np.einsum("il,jkn->ijkln", hess, third)
            - np.einsum("ikn,jl->ijkln", third, hess)
            - np.einsum("ik,jln->ijkln", hess, third))


def extend_curv4(r_x, p):
    """Zero-extend an x-block rank-4 tensor to the full 2p frame."""
    full = np.zeros((2 * p,) * 4)
    full[:p, :p, :p, :p] = r_x
    return full


def extend_curv5(t_x, p):
    full = np.zeros((2 * p,) * 5)
    full[:p, :p, :p, :p, :p] = t_x
    return full


def curvature_symmetry_residuals(r):
    """Max violations of (1,2)-antisymmetry, pair-swap symmetry, and the
    first Bianchi identity."""
    anti = np.abs(r + np.einsum("jikl->ijkl", r)).max()
    pair = np.abs(r - np.einsum("klij->ijkl", r)).max()
    bianchi = np.abs(r + np.einsum("jkil->ijkl", r) + np.einsum("kijl->ijkl", r)).max()
    return {"antisymmetry": float(anti), "pair_swap": float(pair),
            "bianchi": float(bianchi)}


def y_slot_mask(shape, p):
    """Boolean mask selecting tensor components with at least one index in
    the y-block (indices >= p along any axis)."""
    mask = np.zeros(shape, dtype=bool)
    for axis in range(len(shape)):
        index = [slice(None)] * len(shape)
        index[axis] = slice(p, None)
        mask[tuple(index)] = True
    return mask


def full_tensor_checks(field, point):
    """Recompute R and nabla R over the full 2p-dimensional frame from the
    complete Christoffel data, keeping the quadratic curvature terms and the
    frame-correction terms that the x-block route drops, and report how far
    the mixed (y-slot) components are from zero.

    Returns a dict with the full tensors and residuals:
      r_y_max / nabla_r_y_max  -- largest |component| with any y index,
      r_x_diff / nabla_r_x_diff -- x-block mismatch against the dense routes.
    """
    p = field.p
    _check_p(p)
    n = 2 * p
    jet = jet3(field, point.x)
    grad, hess, third = jet.grad, jet.hess, jet.third

    # The metric depends on x only; all derivative components outside the
    # all-x block are exactly zero.
    dg = np.zeros((n, n, n))
    dg[:p, :p, :p] = (np.einsum("am,b->mab", hess, grad)
                      + np.einsum("a,bm->mab", grad, hess))
    d2g = np.zeros((n, n, n, n))
    d2g[:p, :p, :p, :p] = (np.einsum("amn,b->mnab", third, grad)
                           + np.einsum("am,bn->mnab", hess, hess)
                           + np.einsum("an,bm->mnab", hess, hess)
                           + np.einsum("a,bmn->mnab", grad, third))

    gamma = 0.5 * (dg + np.einsum("bac->abc", dg) - np.einsum("cab->abc", dg))
    ginv = metric_inverse_at(field, point)
    gamma_up = np.einsum("abc,cf->abf", gamma, ginv)

    dgamma = 0.5 * (d2g + np.einsum("mcbd->mbcd", d2g)
                    - np.einsum("mdbc->mbcd", d2g))
    r_full = (dgamma - np.einsum("bacd->abcd", dgamma)
              + np.einsum("ace,bde->abcd", gamma_up, gamma)
              - np.einsum("bce,ade->abcd", gamma_up, gamma))

    # d_E R: zero for E in the y-block (R inherits the metric's
    # y-independence); the x-slice is the exact third-jet expression.
    dr = np.zeros((n, n, n, n, n))
    dr[:p, :p, :p, :p, :p] = np.einsum(
        "ijkln->nijkl", nabla_curvature(field, point)
    )
    nabla_full = (np.einsum("eabcd->abcde", dr)
                  - np.einsum("eaf,fbcd->abcde", gamma_up, r_full)
                  - np.einsum("ebf,afcd->abcde", gamma_up, r_full)
                  - np.einsum("ecf,abfd->abcde", gamma_up, r_full)
                  - np.einsum("edf,abcf->abcde", gamma_up, r_full))

    mask4 = y_slot_mask(r_full.shape, p)
    mask5 = y_slot_mask(nabla_full.shape, p)
    r_x = curvature_gauss(hess)
    t_x = nabla_curvature(field, point)
    return {
        "r_full": r_full,
        "nabla_r_full": nabla_full,
        "r_y_max": float(np.abs(r_full[mask4]).max()),
        "nabla_r_y_max": float(np.abs(nabla_full[mask5]).max()),
        "r_x_diff": float(np.abs(r_full[:p, :p, :p, :p] - r_x).max()),
        "nabla_r_x_diff": float(
            np.abs(nabla_full[:p, :p, :p, :p, :p] - t_x).max()
        ),
    }


def tensor_dump(field, point):
    """JSON-ready dump of the tensors at a point (CLI `tensors` schema)."""
    p = field.p
    return {
        "p": p,
        "point": [*map(float, point.x), *map(float, point.y)],
        "metric": metric_at(field, point).tolist(),
        "L": second_ff(field, point).matrix.tolist(),
        "R": curvature_gauss(second_ff(field, point).matrix).tolist(),
        "nablaR": nabla_curvature(field, point).tolist(),
    }


def require_positive_definite(field, point):
    """The hypothesis shared by frames/invariant/spectral constructions."""
    l = second_ff(field, point)
    if not l.positive_definite:
        raise HypothesisError(
            "second fundamental form is not positive definite at this point"
        )
    return l.matrix
