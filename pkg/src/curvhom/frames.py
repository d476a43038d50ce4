"""Admissible tangent-space bases and the point-to-point isometry of
metric and curvature.

An admissible basis (X_1..X_p, Y_1..Y_p) normalizes the metric to the
hyperbolic pairing g(X_i, Y_j) = delta_ij (all other products zero) and the
curvature to delta_il delta_jk - delta_ik delta_jl on the X's, with every
slot containing a Y annihilated.  Construction: factor L = C C^T with
positive pivots in natural index order, set Xbar_i = sum_j (C^-1)_ij dx_j
and Ybar_i = sum_j C_ji dy_j, then subtract the gradient-induced products

    X_i = Xbar_i - 1/2 sum_j g(Xbar_i, Xbar_j) Ybar_j,   Y_i = Ybar_i.

Mapping the admissible basis at P to the one at Q gives a linear map that
pulls back metric and curvature exactly; its failure to pull back nabla R is
what the alpha invariant measures.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from . import geometry
from .errors import HypothesisError
from .field import jet3


@dataclass(frozen=True)
class AdmissibleBasis:
    """Columns 1..p are X_1..X_p, columns p+1..2p are Y_1..Y_p, in the
    coordinate frame (dx, dy)."""

    p: int
    matrix: np.ndarray

    @property
    def x_parts(self):
        """x-components of the X columns (all that curvature ever sees)."""
        return self.matrix[: self.p, : self.p]


def admissible_basis(field, point):
    p = field.p
    jet = jet3(field, point.x)
    c = geometry.try_cholesky(jet.hess)
    if c is None:
        raise HypothesisError(
            "second fundamental form is not positive definite at this point"
        )
    a = solve_triangular(c, np.eye(p), lower=True)
    mixed = a @ jet.grad          # g(Xbar_i, Xbar_j) = mixed_i * mixed_j
    shift = c @ mixed
    b = np.zeros((2 * p, 2 * p))
    b[:p, :p] = a.T
    b[p:, :p] = -0.5 * np.outer(shift, mixed)
    b[p:, p:] = c
    return AdmissibleBasis(p=p, matrix=b)


def _normal_curvature(p):
    eye = np.eye(p)
    return np.einsum("il,jk->ijkl", eye, eye) - np.einsum("ik,jl->ijkl", eye, eye)


def contract4(tensor, b):
    return np.einsum("abcd,ai,bj,ck,dl->ijkl", tensor, b, b, b, b, optimize=True)


def contract5(tensor, b):
    return np.einsum("abcde,ai,bj,ck,dl,en->ijkln", tensor, b, b, b, b, b,
                     optimize=True)


def is_admissible(basis, field, point, tol=1e-9):
    """Check the normalizations; returns (ok, residual report)."""
    b = basis.matrix if isinstance(basis, AdmissibleBasis) else np.asarray(basis)
    p = field.p
    g = geometry.metric_at(field, point)
    gb = b.T @ g @ b
    r_full = geometry.extend_curv4(
        geometry.curvature_gauss(jet3(field, point.x).hess), p
    )
    rb = contract4(r_full, b)
    ymask = geometry.y_slot_mask(rb.shape, p)
    report = {
        "g_xx": float(np.abs(gb[:p, :p]).max()),
        "g_xy": float(np.abs(gb[:p, p:] - np.eye(p)).max()),
        "g_yy": float(np.abs(gb[p:, p:]).max()),
        "r_normal_form": float(
            np.abs(rb[:p, :p, :p, :p] - _normal_curvature(p)).max()
        ),
        "r_y_slots": float(np.abs(rb[ymask]).max()),
        "tol": float(tol),
    }
    report["passed"] = bool(all(
        report[k] < tol
        for k in ("g_xx", "g_xy", "g_yy", "r_normal_form", "r_y_slots")
    ))
    return report["passed"], report


def random_orthogonal(rng, p):
    m = rng.standard_normal((p, p))
    q, r = np.linalg.qr(m)
    return q @ np.diag(np.where(np.diag(r) < 0, -1.0, 1.0))


def mix_admissible(basis, orthogonal):
    """Replace X_i by sum_j O_ij X_j and Y_i by sum_j O_ij Y_j.  For
    orthogonal O this preserves every admissibility normalization (the
    hyperbolic pairing and the delta-delta curvature pattern are invariant
    under simultaneous orthogonal mixing)."""
    p = basis.p
    mix = np.zeros((2 * p, 2 * p))
    mix[:p, :p] = orthogonal.T
    mix[p:, p:] = orthogonal.T
    return AdmissibleBasis(p=p, matrix=basis.matrix @ mix)


def random_admissible(basis, seed, field=None, point=None, tol=1e-9):
    """Mix by a seeded random orthogonal matrix.  When field/point are
    supplied the input is validated first."""
    if field is not None and point is not None:
        ok, report = is_admissible(basis, field, point, tol)
        if not ok:
            raise HypothesisError(f"input basis is not admissible: {report}")
    return mix_admissible(
        basis, random_orthogonal(np.random.default_rng(seed), basis.p)
    )


def basis_dump(field, point, tol=1e-9):
    """JSON-ready dump of the admissible basis at a point with the residuals
    of each normalization family."""
    basis = admissible_basis(field, point)
    _, report = is_admissible(basis, field, point, tol)
    return {
        "P": [*map(float, point.x), *map(float, point.y)],
        "basis": basis.matrix.tolist(),
        "checks": {k: report[k] for k in ("g_xx", "g_xy", "g_yy",
                                          "r_normal_form", "r_y_slots")},
    }


def homogeneity_map(field, point_p, point_q):
    """Linear map T_P -> T_Q carrying the admissible basis at P to the one
    at Q; pulls back metric and curvature at Q onto those at P."""
    bp = admissible_basis(field, point_p).matrix
    bq = admissible_basis(field, point_q).matrix
    return bq @ np.linalg.inv(bp)


def pullback_residuals(field, point_p, point_q, psi=None):
    """Sup-norm residuals of the pullback along psi (default: the
    homogeneity map): metric, curvature, and nabla-curvature mismatch."""
    p = field.p
    if psi is None:
        psi = homogeneity_map(field, point_p, point_q)
    g_p = geometry.metric_at(field, point_p)
    g_q = geometry.metric_at(field, point_q)
    r_p = geometry.extend_curv4(
        geometry.curvature_gauss(jet3(field, point_p.x).hess), p
    )
    r_q = geometry.extend_curv4(
        geometry.curvature_gauss(jet3(field, point_q.x).hess), p
    )
    t_p = geometry.extend_curv5(geometry.nabla_curvature(field, point_p), p)
    t_q = geometry.extend_curv5(geometry.nabla_curvature(field, point_q), p)
    return {
        "metric": float(np.abs(psi.T @ g_q @ psi - g_p).max()),
        "curvature": float(np.abs(contract4(r_q, psi) - r_p).max()),
        "nabla_curvature": float(np.abs(contract5(t_q, psi) - t_p).max()),
    }
